use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid norm descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("vector too short for a fundamental tensor (F = {norm:e})")]
    DegenerateVector { norm: f64 },

    #[error("Newton iteration did not converge (residual {residual:e} after {iterations} steps)")]
    NoConvergence { residual: f64, iterations: usize },

    #[error("unsupported metric/measure family: {0}")]
    UnsupportedFamily(String),

    #[error("gradient field degenerate at node {node} (F = {norm:e})")]
    DegenerateField { node: usize, norm: f64 },

    #[error("conjugate gradient exceeded {iterations} iterations (relative residual {residual:e})")]
    SolverDivergence { iterations: usize, residual: f64 },

    #[error("explicit step dt = {dt:e} exceeds the stability limit {limit:e}")]
    CflViolation { dt: f64, limit: f64 },

    #[error("invalid time index range: {0}")]
    IndexRange(String),

    #[error("profile inadmissible: {0}")]
    ProfileInadmissible(String),

    #[error("argument {x} outside the domain (upper limit {limit})")]
    DomainError { x: f64, limit: f64 },

    #[error("no root: {0}")]
    NoRoot(String),

    #[error("conjugate is unbounded at {0}")]
    Unbounded(f64),

    #[error("alpha changes sign on [{t1}, {t2}]")]
    AlphaSignChange { t1: f64, t2: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("check '{check}' failed to evaluate: {source}")]
    Check { check: String, source: Box<Error> },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Toml(#[from] toml::de::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
