//! Crate-wide error type.
//!
//! Errors are split by how a caller should react rather than by module:
//! `Domain` and `Precondition` mean the request itself is invalid,
//! `Capacity` means the request is well-formed but exceeds a configured
//! resource limit (the distinction matters to the CLI, which maps the two
//! groups to different exit codes), and the remaining variants carry
//! structured context for format and construction failures.

use num_bigint::BigUint;
use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// The arguments lie outside the operation's domain (e.g. `k = 0`).
    #[error("domain error: {0}")]
    Domain(String),

    /// The request is valid but exceeds a configured size or budget limit.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// A documented precondition does not hold (e.g. an unverified input
    /// colouring where a clean one is required).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A colouring value violates its structural invariants.
    #[error("invalid colouring: {0}")]
    InvalidColouring(String),

    /// A family of classes fails to cover `{1..n}`; carries the least
    /// uncovered point as a witness.
    #[error("coverage gap: least uncovered point is {witness}")]
    Coverage { witness: BigUint },

    /// Textual input could not be parsed; `line` is 1-based.
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
