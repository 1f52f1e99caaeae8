//! Numeric machinery behind the density-increment upper-bound argument.
//!
//! Three layers, each usable on its own:
//!
//! * [`fourier`] — exponential sums over squares, best rational
//!   approximation, major-arc membership, the progression measure's
//!   Dirichlet kernel, and Parseval cross-checks. These are the
//!   diagnostic quantities; nothing downstream depends on them.
//! * [`increment`] — the exact trichotomy engine: given a set, either
//!   its inspection window is already too coarse, or it contains many
//!   square-difference solutions, or some arithmetic progression of
//!   square common difference carries visibly higher density. Found by
//!   direct search, so every returned branch is a checkable certificate.
//! * [`trace`] — replays the colouring iteration: repeatedly extracts
//!   many square differences from the current intersection set, observes
//!   which colour class must absorb the witnesses, and descends into it.
//!
//! All tunable exponents and constants that the underlying argument
//! leaves implicit are gathered in [`IncrementConfig`] with explicit
//! defaults; everything is deterministic given a configuration.

pub mod fourier;
pub mod increment;
pub mod trace;

pub use fourier::{
    diophantine_approx, kernel_arc_report, major_arc_membership, parseval_check,
    progression_measure_hat, weyl_envelope_report, weyl_sum, BalancedIndicator, EnvelopePoint,
    EnvelopeReport, KernelArcReport, ParsevalReport, Theta,
};
pub use increment::{
    density_increment_iterate, increment_search, IncrementConfig, IncrementOutcome, IterateOutcome,
    IterateStage, IterateTermination,
};
pub use trace::{iteration_trace, IterationTrace, TraceStage, TraceTermination};
