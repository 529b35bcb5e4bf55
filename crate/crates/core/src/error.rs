use thiserror::Error;

use crate::densify::ApproxResult;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("the zero polynomial has no {0}")]
    ZeroPolynomial(&'static str),
    #[error("polynomial must have degree >= 1")]
    ConstantPolynomial,
    #[error("polynomial coefficients must be integers")]
    NotInteger,
    #[error("root finder did not reach tolerance after {iterations} iterations")]
    NonConvergence { iterations: usize },
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("deflation residual {residual:e} exceeds tolerance {tol:e}")]
    Deflation { residual: f64, tol: f64 },
    #[error("entry ({row},{col}) must be positive")]
    NonPositiveEntry { row: usize, col: usize },
    #[error("unsupported surface {0}")]
    UnsupportedSurface(String),
    #[error("invalid twist vector: {0}")]
    InvalidTwist(String),
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("vertices {0} and {1} are not adjacent (omega entry is zero)")]
    NoEdge(usize, usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("not a Perron-Frobenius matrix: {0}")]
    NotPerronFrobenius(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("search budget exhausted after {} nodes (best coefficient error {:.3e}, {:.3e})",
        .best.stats.nodes, .best.coeff_error.0, .best.coeff_error.1)]
    SearchExhausted { best: Box<ApproxResult> },
}
