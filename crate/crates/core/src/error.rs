use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QcError {
    #[error("point {z} lies outside the analyticity radius {radius}")]
    OutsideDomain { z: Complex64, radius: f64 },
    #[error("pole encountered at {z}")]
    Pole { z: Complex64 },
    #[error("parameter {name} out of range: {detail}")]
    InvalidParameter { name: &'static str, detail: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("branch tracking failed at {z}: {detail}")]
    Branch { z: Complex64, detail: String },
    #[error("non-finite value at {z}")]
    NonFinite { z: Complex64 },
}

pub type Result<T> = std::result::Result<T, QcError>;

pub(crate) fn invalid(name: &'static str, detail: impl Into<String>) -> QcError {
    QcError::InvalidParameter { name, detail: detail.into() }
}
