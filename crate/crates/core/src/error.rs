use thiserror::Error;

/// Errors raised by the spectral routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument {value} outside [-1, 1]")]
    Domain { value: f64 },

    #[error("invalid dimension {0}")]
    InvalidDimension(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("coefficient {index} is negative ({value:e}); no real convolution root in this basis")]
    NegativeCoefficient { index: usize, value: f64 },

    #[error("sign sequence has {found} entries but {needed} are required")]
    SignSequenceTooShort { needed: usize, found: usize },

    #[error("sign entries must be +1 or -1, found {0}")]
    InvalidSign(f64),

    #[error("cap radius {0} outside (0, pi/2]")]
    CapRadius(f64),

    #[error("invalid kernel parameter: {0}")]
    KernelParameter(String),

    #[error("dimension {0} is even; the roughness construction needs an odd dimension >= 3")]
    EvenDimension(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
