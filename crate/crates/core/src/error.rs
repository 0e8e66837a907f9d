use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid scalar literal `{0}`")]
pub struct ParseScalarError(pub String);

/// Errors raised by the algebraic constructions.
///
/// Variants that reject an input carry a witness rendered as text (usually
/// the coordinates of an offending element) so that failures are reproducible.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("structure check failed: {0}")]
    InvalidAlgebra(String),

    #[error("not an ideal: {witness}")]
    NotAnIdeal { witness: String },

    #[error("ideals do not cover the algebra, common element {witness}")]
    IntersectionNonzero { witness: String },

    #[error("partition functional ill-defined on chart {chart}: {witness}")]
    IllDefined { chart: usize, witness: String },

    #[error("coefficient is not central: {witness}")]
    NonCentral { witness: String },

    #[error("mismatched kappa-Minkowski parameters: {0}")]
    ParameterMismatch(String),

    #[error("{generator} requires d = 3 (got d = {d})")]
    RequiresThreeDimensions { generator: String, d: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("smash product degree {degree} exceeds declared bound {bound}")]
    DegreeOverflow { degree: u32, bound: u32 },

    #[error("derivation basis is not closed under the bracket: {witness}")]
    NotBracketClosed { witness: String },

    #[error("operator is not in the span of the derivation basis: {0}")]
    NotInSpan(String),

    #[error("invalid action assignment: {0}")]
    InvalidAction(String),
}

pub type Result<T> = std::result::Result<T, Error>;
