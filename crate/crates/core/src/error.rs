use thiserror::Error;

use crate::specfun::SpecialError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Special(#[from] SpecialError),
    #[error("invalid {field}: {reason}")]
    InvalidParameter { field: &'static str, reason: String },
    #[error("{quantity} diverges: {reason}")]
    Divergent {
        quantity: &'static str,
        reason: String,
    },
    #[error("overflow evaluating {0}")]
    Overflow(&'static str),
    #[error("objective has no finite value on [{lo}, {hi}]")]
    NoMinimum { lo: f64, hi: f64 },
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Self::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }

    /// Dotted field name for parameter errors.
    pub fn field(&self) -> Option<&'static str> {
        match self {
            Self::InvalidParameter { field, .. } => Some(field),
            _ => None,
        }
    }
}
