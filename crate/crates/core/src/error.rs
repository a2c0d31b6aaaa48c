use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not a limit ordinal: {0}")]
    NotALimit(String),
    #[error("predecessor of zero")]
    ZeroArgument,
    #[error("budget exceeded after {steps} steps")]
    BudgetExceeded { steps: u64 },
    #[error("enumeration exceeded {limit} elements")]
    CombinatorialExplosion { limit: usize },
    #[error("element outside the domain of {term}: {element}")]
    DomainMismatch { term: String, element: String },
    #[error("unsupported term: {0}")]
    UnsupportedTerm(String),
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
    #[error("ordinal out of range: {0}")]
    OutOfRange(String),
    #[error("norm {norm} exceeds {bound}")]
    NormTooLarge { norm: u64, bound: u64 },
    #[error("empty input: {0}")]
    EmptyInput(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("index error: {0}")]
    Index(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid control function: {0}")]
    InvalidControl(String),
}

impl Error {
    /// True for the errors that mean "too large for desk scale".
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. } | Error::CombinatorialExplosion { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
