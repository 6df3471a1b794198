use thiserror::Error;

use crate::scalar::FieldSpec;

#[derive(Debug, Error)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("unknown builtin {0:?}")]
    UnknownBuiltin(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("space of dimension {requested} exceeds the size cap {cap}")]
    SizeCapExceeded { requested: u128, cap: usize },
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("bicomplex identity failed: {0}")]
    BicomplexIdentityFailure(String),
    #[error("total differential does not square to zero: {0}")]
    TotalizationSignFailure(String),
    #[error("truncation {truncation} too small for degree {degree}")]
    TruncationTooSmall { degree: usize, truncation: usize },
    #[error("not a cocycle: {0}")]
    NotACocycle(String),
    #[error("explicit identities disagree with the matrix kernel: {0}")]
    InconsistentWithMatrixKernel(String),
    #[error("validation failed: {0}")]
    ValidationFailure(String),
    #[error("sequence is not exact: {0}")]
    NotExact(String),
    #[error("section construction failed: {0}")]
    SectionFailure(String),
    #[error("search space of size {0} is too large")]
    SearchSpaceTooLarge(u128),
    #[error("horizontal image is not alternating: {0}")]
    ImageNotAlternating(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Errors that indicate a broken internal identity rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::BicomplexIdentityFailure(_)
                | Error::TotalizationSignFailure(_)
                | Error::InconsistentWithMatrixKernel(_)
                | Error::ImageNotAlternating(_)
                | Error::SectionFailure(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
