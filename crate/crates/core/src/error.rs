use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("order of zero undefined")]
    OrderOfZero,
    #[error("zero polynomial passed to {0}")]
    ZeroPolynomial(&'static str),
    #[error("not a place: {0}")]
    InvalidPlace(String),
    #[error("point has only zero coordinates")]
    ZeroPoint,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("point on divisor")]
    PointOnDivisor,
    #[error("empty family")]
    EmptyFamily,
    #[error("duplicate points")]
    DuplicatePoints,
    #[error("base points: the forms have a common zero ({0})")]
    BasePoints(String),
    #[error("parametrization not birational (generic fibre has {0} points)")]
    NotBirational(usize),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("emptiness test unsupported: {0}")]
    EmptinessUnsupported(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("inhomogeneous: term {term} has degree {got}, expected {expected}")]
    Inhomogeneous {
        term: String,
        expected: u32,
        got: u32,
    },
    #[error("point in divisor support (excluded)")]
    Excluded,
    #[error("invalid scenario: {0}")]
    Scenario(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "division_by_zero",
            Error::OrderOfZero => "order_of_zero",
            Error::ZeroPolynomial(_) => "zero_polynomial",
            Error::InvalidPlace(_) => "invalid_place",
            Error::ZeroPoint => "zero_point",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::PointOnDivisor => "point_on_divisor",
            Error::EmptyFamily => "empty_family",
            Error::DuplicatePoints => "duplicate_points",
            Error::BasePoints(_) => "base_points",
            Error::NotBirational(_) => "not_birational",
            Error::PreconditionViolated(_) => "precondition_violated",
            Error::EmptinessUnsupported(_) => "emptiness_unsupported",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Syntax { .. } => "syntax",
            Error::Inhomogeneous { .. } => "inhomogeneous",
            Error::Excluded => "excluded",
            Error::Scenario(_) => "scenario",
        }
    }
}
