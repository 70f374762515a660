use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension d = {0}")]
    InvalidDimension(usize),

    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },

    #[error("qudit index {index} out of range for {n} qudits")]
    QuditOutOfRange { index: usize, n: usize },

    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),

    #[error("operator is not block diagonal on qudit {qudit} (off-diagonal norm {norm:.3e})")]
    NotBlockDiagonal { qudit: usize, norm: f64 },

    #[error("operator is not X-compressed on qudit {qudit} (commutator norm {norm:.3e})")]
    NotXCompressed { qudit: usize, norm: f64 },

    #[error("operator is not unitary (deviation {0:.3e})")]
    NonUnitary(f64),

    #[error("malformed document: {0}")]
    Malformed(String),

    #[error("slice {slice}: {message}")]
    WidthViolation { slice: usize, message: String },

    #[error("boundary point count {0} is odd")]
    OddBoundary(usize),

    #[error("unknown builtin diagram '{0}'")]
    UnknownBuiltin(String),

    #[error("unknown relation '{0}'")]
    UnknownRelation(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn shape(expected: impl ToString, found: impl ToString) -> Self {
        Error::ShapeMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}
