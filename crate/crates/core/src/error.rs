use alloc::string::String;

/// Errors raised by the exact algebra.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("incommensurable exponents: {0} vs {1}")]
    IncommensurableExponents(String, String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("coordinate {coord} out of range for dimension {dims}")]
    CoordinateOutOfRange { coord: usize, dims: usize },
    #[error("rotation matrix not exactly unitary")]
    NotUnitary,
    #[error("not poly-analytic of finite order (function carries a z-bar exponential factor)")]
    NotPolyAnalytic,
    #[error("function is not analytic")]
    NotAnalytic,
    #[error("not a polynomial (exponential factor present)")]
    NotPolynomial,
    #[error("not a pure level-{0} element")]
    NotPureLevel(u32),
    #[error("operator does not preserve F^2_{0}")]
    NotInvariant(u32),
    #[error("{0} is not an eigenvalue")]
    NotAnEigenvalue(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal invariant breached: {0}")]
    InvariantBreach(String),
}

pub type Result<T> = core::result::Result<T, Error>;
