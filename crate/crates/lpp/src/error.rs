//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A model specification is structurally malformed (before any
    /// admissibility question arises). Names the offending field.
    #[error("malformed model: field `{field}`: {reason}")]
    ModelStructure { field: String, reason: String },

    /// Operation defined only for arithmetic-table models.
    #[error("unsupported operation for this model kind: {0}")]
    UnsupportedModelKind(&'static str),

    /// Requested window would exceed the materialization cap.
    #[error("window [{lo}, {hi}] has {edges} edges, exceeding the cap of {cap}")]
    WindowTooLarge { lo: i64, hi: i64, edges: usize, cap: usize },

    /// Brute-force enumeration refused: the gap is too wide.
    #[error("brute force refused: k - j = {gap} exceeds the limit of {limit}")]
    RangeTooLarge { gap: i64, limit: i64 },

    /// No finite-weight path exists between the requested endpoints.
    #[error("no finite-weight path from {j} to {k}")]
    NoPath { j: i64, k: i64 },

    /// Vertex too close to the window boundary for the requested events.
    #[error("vertex {x} violates the margin {margin} of window [{lo}, {hi}]")]
    MarginViolation { x: i64, lo: i64, hi: i64, margin: i64 },

    /// Not enough data to estimate the requested quantity.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// Estimation produced no usable observations.
    #[error("estimation failure: {0}")]
    EstimationFailure(String),

    /// CGF query outside the declared domain rectangle.
    #[error("cgf domain violation at (lambda, mu) = ({lambda}, {mu})")]
    CgfOutOfDomain { lambda: f64, mu: f64 },

    /// CGF query where the effective sample size fell below the floor.
    #[error("cgf effective sample size {ess:.1} below floor {floor} at ({lambda}, {mu})")]
    CgfEssBelowFloor { lambda: f64, mu: f64, ess: f64, floor: f64 },

    /// Iterative solver did not converge.
    #[error("solver did not converge after {iterations} iterations (last iterate {last:?})")]
    NonConvergence { iterations: usize, last: (f64, f64) },

    /// Configuration text failed to parse.
    #[error("config syntax error: {0}")]
    ConfigSyntax(String),

    /// Configuration parsed but violated schema or cross-field rules.
    /// Carries every violation, not just the first.
    #[error("invalid config: {}", violations.join("; "))]
    ConfigInvalid { violations: Vec<String> },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Error {
        Error::Io { path: path.into(), source }
    }
}
