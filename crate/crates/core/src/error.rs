use thiserror::Error;

/// Errors shared by every module in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("codomain mismatch: expected a set of size {expected}, found size {found}")]
    CodomainMismatch { expected: usize, found: usize },

    #[error("domain mismatch: expected a set of size {expected}, found size {found}")]
    DomainMismatch { expected: usize, found: usize },

    #[error("index {index} out of range for a set of size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("base mismatch: expected a base of size {expected}, found size {found}")]
    BaseMismatch { expected: usize, found: usize },

    #[error("bundle map square does not commute at total element {element}")]
    SquareDoesNotCommute { element: usize },

    #[error("fiber map over base point {base} is not a bijection")]
    NotFiberwiseBijective { base: usize },

    #[error("map is not cartesian: fiber over base point {base} is not carried bijectively")]
    NotCartesian { base: usize },

    #[error("enumeration of {needed} candidates exceeds the cap of {cap}")]
    EnumerationCapExceeded { needed: u128, cap: u64 },

    #[error("cardinality {value} exceeds the addressable range")]
    CardinalityOverflow { value: String },

    #[error("invalid {field}: {reason}")]
    Validation { field: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn validation(field: &str, reason: impl Into<String>) -> Self {
        Error::Validation {
            field: field.to_string(),
            reason: reason.into(),
        }
    }
}
