use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("sqrt presentation is inseparable in characteristic 2")]
    Inseparable,
    #[error("artin-schreier presentation requires characteristic 2, got {characteristic}")]
    WrongKind { characteristic: u64 },
    #[error("minimal polynomial is reducible for d = {0}")]
    Reducible(String),
    #[error("b must be nonzero")]
    ZeroB,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix is singular")]
    Singular,
    /// A nonzero pivot turned out not to be invertible (split algebra).
    #[error("encountered a zero divisor during elimination")]
    ZeroDivisor,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairError {
    #[error("polar Gram H is singular")]
    SingularH,
    #[error("matrix is not symmetric for the involution")]
    NotSymmetric,
    #[error("semitrace data is inconsistent with any generalized quadratic form")]
    Inconsistent,
    #[error("zero vector")]
    ZeroVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescentError {
    #[error("vector is not isotropic")]
    NotIsotropic,
    #[error("zero vector")]
    ZeroVector,
    #[error("quaternion algebra carries no division certificate ({0})")]
    NoCertificate(String),
    #[error("degree precondition violated: deg {actual} > {bound}")]
    PreconditionDegree { actual: u64, bound: u64 },
    #[error("claim violated: {0}")]
    ClaimViolation(String),
    #[error("internal invariant failed: {0}")]
    InternalInvariant(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, msg: impl Into<String>) -> Self {
        ParseError { line, col, msg: msg.into() }
    }
}
