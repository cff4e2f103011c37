use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("coefficient mode mismatch: {0:?} vs {1:?}")]
    ModeMismatch(crate::CoefficientMode, crate::CoefficientMode),

    #[error("constant term {0} is not a unit")]
    NotAUnit(String),

    #[error("term {monomial} is not divisible by {generator}")]
    NotDivisible { monomial: String, generator: String },

    #[error("image of {generator} is not homogeneous of degree {degree}: {image}")]
    InhomogeneousImage {
        generator: String,
        degree: u32,
        image: String,
    },

    #[error("generator {generator} does not belong to ring {ring}")]
    ForeignGenerator { generator: String, ring: String },

    #[error("ring {ring} has no integration table")]
    NoIntegration { ring: String },

    #[error("top-degree monomial {monomial} missing from the integration table of {ring}")]
    MissingIntegral { monomial: String, ring: String },

    #[error("invalid presentation {ring}: {reason}")]
    InvalidPresentation { ring: String, reason: String },

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("Whitney violation in degree {degree}: i*c(M) = {pulled_back}, c(N)c(E) = {product}")]
    WhitneyViolation {
        degree: u32,
        pulled_back: String,
        product: String,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("inconsistent embedding table: {0}")]
    TableInconsistency(String),

    #[error("elements belong to different blow-up contexts")]
    ContextMismatch,

    #[error("wrong coefficient mode: {0}")]
    WrongCoefficients(String),

    #[error("{0}")]
    Unsupported(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("{0}")]
    Io(String),
}
