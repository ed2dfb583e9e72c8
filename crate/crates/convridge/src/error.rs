use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    BadConfig(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("variance must be nonnegative, got {0}")]
    NegativeVariance(f64),

    #[error("AR(1) coefficient must satisfy |a| < 1, got {0}")]
    UnstableProcess(f64),

    #[error("kernel width k={k} exceeds signal length T={t_len}")]
    KernelTooWide { k: usize, t_len: usize },

    #[error("state evolution diverges: alpha^2 = {alpha2} >= delta = {delta}")]
    DivergentStateEvolution { alpha2: f64, delta: f64 },

    #[error("time-domain oracle limited to n_x*T <= {limit}, got {actual}")]
    OracleScaleExceeded { limit: usize, actual: usize },

    #[error("matrix is not positive definite (pivot {pivot} at column {col})")]
    NotPositiveDefinite { pivot: f64, col: usize },

    #[error("reference signal has zero norm")]
    ZeroSignal,

    #[error("sample sets must have equal length: {0} vs {1}")]
    SampleSizeMismatch(usize, usize),

    #[error("no rows to emit")]
    EmptyRows,

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
