use thiserror::Error;

/// Errors raised across the crate.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("invalid root system: {0}")]
    InvalidRootSystem(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("integer overflow in exact matrix arithmetic")]
    Overflow,
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not unimodular (det = {0})")]
    NotUnimodular(i64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("index {index} out of range 1..={rank}")]
    Index { index: usize, rank: usize },
    #[error("improper coloring: vertices {0} and {1} are adjacent and share a colour")]
    ImproperColoring(usize, usize),
    #[error("graph is not a tree: {0}")]
    NotATree(String),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("order not found <= {0}")]
    OrderCapExceeded(u32),
    #[error("not an eigenvector: residual {residual:e} exceeds {tolerance:e}")]
    NotEigenvector { residual: f64, tolerance: f64 },
    #[error("factorization failed: {0}")]
    Factorization(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
