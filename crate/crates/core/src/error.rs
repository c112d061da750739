use thiserror::Error;

/// Every failure the engine can report. Variants map one-to-one onto the
/// documented error kinds of the scene runner.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree {degree} exceeds the factorization bound {bound}")]
    DegreeTooLarge { degree: usize, bound: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("effort budget exceeded: {0}")]
    EffortExceeded(String),

    #[error("the ideal is the unit ideal (empty zero set)")]
    UnitIdeal,

    #[error("ideal is not zero-dimensional")]
    NotZeroDimensional,

    #[error("group closure exceeded {0} elements")]
    NotFinite(usize),

    #[error("group action is not faithful")]
    NotFaithful,

    #[error("generator matrix is not invertible or not square")]
    NotInvertible,

    #[error("invariant {0} is not fixed by the group")]
    NotInvariant(String),

    #[error("{0} is not in the subalgebra generated by the invariants")]
    NotInSubalgebra(String),

    #[error("cycles do not intersect properly: {0}")]
    NotProper(String),

    #[error("no separating linear form found after {0} attempts")]
    SeparationFailure(usize),

    #[error("unsupported intersection shape: {0}")]
    UnsupportedShape(String),

    #[error("preimage is neither a supported hypersurface nor finite: {0}")]
    UnsupportedPreimageShape(String),

    #[error("preimage is not equidimensional: {0}")]
    NotEquidimensional(String),

    #[error("map is not finite on the support of the cycle: {0}")]
    NotFiniteOnSupport(String),

    #[error("generic fibre samples disagree: {first} vs {second}")]
    SampleDisagreement { first: String, second: String },

    #[error("specialization degenerates at {0}")]
    SpecializationDegenerate(String),

    #[error("chart mismatch: {0}")]
    ChartMismatch(String),

    #[error("denominator vanishes identically under pull-back: {0}")]
    DenominatorVanishes(String),

    #[error("descent ansatz exhausted: {0}")]
    AnsatzExhausted(String),

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("invalid cycle: {0}")]
    InvalidCycle(String),

    #[error("map is not equivariant: {0}")]
    NotEquivariant(String),

    #[error("parse error at column {column}: {message}")]
    Parse { message: String, column: usize },

    #[error("unknown variable {0}")]
    UnknownVariable(String),
}

impl Error {
    /// Stable short name used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DegreeTooLarge { .. } => "DegreeTooLarge",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::EffortExceeded(_) => "EffortExceeded",
            Error::UnitIdeal => "UnitIdeal",
            Error::NotZeroDimensional => "NotZeroDimensional",
            Error::NotFinite(_) => "NotFinite",
            Error::NotFaithful => "NotFaithful",
            Error::NotInvertible => "NotInvertible",
            Error::NotInvariant(_) => "NotInvariant",
            Error::NotInSubalgebra(_) => "NotInSubalgebra",
            Error::NotProper(_) => "NotProper",
            Error::SeparationFailure(_) => "SeparationFailure",
            Error::UnsupportedShape(_) => "UnsupportedShape",
            Error::UnsupportedPreimageShape(_) => "UnsupportedPreimageShape",
            Error::NotEquidimensional(_) => "NotEquidimensional",
            Error::NotFiniteOnSupport(_) => "NotFiniteOnSupport",
            Error::SampleDisagreement { .. } => "SampleDisagreement",
            Error::SpecializationDegenerate(_) => "SpecializationDegenerate",
            Error::ChartMismatch(_) => "ChartMismatch",
            Error::DenominatorVanishes(_) => "DenominatorVanishesIdentically",
            Error::AnsatzExhausted(_) => "AnsatzExhausted",
            Error::FieldMismatch(_) => "FieldMismatch",
            Error::InvalidCycle(_) => "InvalidCycle",
            Error::NotEquivariant(_) => "NotEquivariant",
            Error::Parse { .. } => "ParseError",
            Error::UnknownVariable(_) => "ChartError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
