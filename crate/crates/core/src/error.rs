use thiserror::Error;

/// Errors raised anywhere in the workbench.
///
/// The variants map onto three CLI exit classes: parameter errors,
/// precision errors and everything else (which is a bug, not a verdict).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("inconsistent twist: q^f = {q}^{f} is not 1 mod {e}")]
    InconsistentTwist { e: u64, f: u64, q: u64 },
    #[error("no subgroup of order {e} in a field of {p}^{g} elements")]
    NoSuchSubgroup { p: u64, g: usize, e: u64 },
    #[error("element is not a power of the distinguished generator")]
    NotInSubgroup,
    #[error("operands belong to different groups")]
    MixedGroups,
    #[error("module dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("insufficient precision: {0}")]
    Precision(String),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn precision(msg: impl Into<String>) -> Self {
        Error::Precision(msg.into())
    }

    /// Whether this error stems from a precision budget rather than bad input.
    pub fn is_precision(&self) -> bool {
        matches!(self, Error::Precision(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
