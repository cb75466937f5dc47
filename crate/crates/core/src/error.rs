use thiserror::Error;

/// Errors raised by the decoupling library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("level index {k} out of range for dimension {n} (expected 0..={max})", max = .n.saturating_sub(2))]
    LevelIndex { n: usize, k: usize },

    #[error("index {index} out of range 1..={max} for {what}")]
    Index {
        what: &'static str,
        index: usize,
        max: usize,
    },

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("invalid argument `{name}`: {reason}")]
    Argument { name: &'static str, reason: String },

    #[error("invalid pulse fractions at index {index}: {reason}")]
    Fractions { index: usize, reason: String },

    #[error("quadrature did not converge after {intervals} intervals (previous estimate {previous:?}, last estimate {last:?})")]
    Convergence {
        intervals: usize,
        previous: Vec<f64>,
        last: Vec<f64>,
    },

    #[error("Fock truncation too small for mode omega={omega}: tail weight {tail:e} >= {limit:e}, use fock_dim >= {suggested}")]
    Truncation {
        omega: f64,
        tail: f64,
        limit: f64,
        suggested: usize,
    },

    #[error("segment propagator unstable under step halving: deviation {deviation:e} > {limit:e}")]
    SubstepConvergence { deviation: f64, limit: f64 },

    #[error("singular matrix in linear solve")]
    Singular,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn argument(name: &'static str, reason: impl Into<String>) -> Error {
    Error::Argument {
        name,
        reason: reason.into(),
    }
}
