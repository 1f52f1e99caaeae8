//! Toolkit for colourings of `{1..n}` that avoid monochromatic solutions
//! of `x - y = z^2`.
//!
//! The crate groups into five areas:
//!
//! * [`colouring`] — the colouring value type (explicit or interval-run
//!   form with arbitrary-precision endpoints), solution enumeration, the
//!   run-based verifier and the text interchange format;
//! * [`construct`] — the doubly-exponential solution-free colouring
//!   (`{1}` plus blocks `[2^(2^i), 2^(2^(i+1))]`) and cover-to-partition
//!   normalisation;
//! * [`search`] — exact backtracking feasibility, the largest-`n`
//!   computation, a DIMACS CNF encoding and a small DPLL solver used as a
//!   cross-checking oracle;
//! * [`counting`] — per-class solution counts, square-difference and
//!   trilinear counting, and exact maximum square-difference-free subsets
//!   computed by two independent algorithms;
//! * [`analytic`] — quadratic exponential sums, rational approximation,
//!   major-arc membership, progression Fourier coefficients, a Parseval
//!   identity check, and the density-increment search, iteration and
//!   colouring trace built on top of it.

pub mod analytic;
pub mod colouring;
pub mod construct;
pub mod counting;
pub mod error;
pub mod search;

pub use colouring::{
    enumerate_solutions, is_solution, solution_count, Colouring, Run, SolutionTriple, Verdict,
};
pub use error::{Error, Result};
