use thiserror::Error;

/// Errors produced by rule/config construction and by the analysis routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CaError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(u64),

    #[error("alphabet must have at least 2 letters, got {0}")]
    AlphabetTooSmall(usize),

    #[error("coefficient index {index} exceeds declared radius {radius}")]
    IndexOutsideRadius { index: i64, radius: u32 },

    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),

    #[error("letter {letter} is outside an alphabet of size {alphabet}")]
    AlphabetMismatch { letter: u32, alphabet: usize },

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("rule is not surjective")]
    NotSurjective,

    #[error("the chosen middle word makes the configuration spatially periodic")]
    DegenerateMiddle,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl CaError {
    pub(crate) fn syntax(position: usize, message: impl Into<String>) -> Self {
        CaError::Syntax {
            position,
            message: message.into(),
        }
    }
}

pub type Result<T, E = CaError> = std::result::Result<T, E>;
