use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate basis or generator name `{0}`")]
    DuplicateName(String),
    #[error("a graded space needs at least one basis vector")]
    EmptySpace,
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("degree 0 has no monomials in the reduced symmetric algebra")]
    DegreeZero,
    #[error("invalid unshuffle type ({k}, {n})")]
    InvalidUnshuffle { k: usize, n: usize },
    #[error("index {index} out of range for a word of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("odd basis vector `{0}` appears with exponent greater than 1")]
    OddSquared(String),
    #[error("monomial does not belong to the space: {0}")]
    InvalidMonomial(String),
    #[error("basis index {0} is not in the space")]
    InvalidBasisIndex(usize),
    #[error("operands live over different graded spaces")]
    SpaceMismatch,
    #[error("operands live over different parameter rings")]
    RingMismatch,
    #[error("element is not parity homogeneous")]
    MixedParity,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid arity window {min}..={max}")]
    InvalidWindow { min: usize, max: usize },
    #[error("the correspondence with Lie brackets needs a purely odd space")]
    NotPurelyOdd,
    #[error("cochain must be concentrated in arity {0}")]
    WrongArity(usize),
    #[error("polynomial of degree {degree} exceeds truncation degree {truncation}; raise the truncation degree")]
    DegreeOverflow { degree: u32, truncation: u32 },
    #[error("ideals truncated at different degrees ({left} and {right})")]
    TruncationMismatch { left: u32, right: u32 },
    #[error("not a codifferential: {0}")]
    NotCodifferential(String),
    #[error("obstruction coefficient at parameter monomial {monomial} is not a cocycle modulo the relations")]
    NotCocycle { monomial: String },
    #[error("element is not a unit (zero constant term)")]
    NotUnit,
    #[error("linear part of the morphism is not invertible")]
    NotInvertible,
    #[error("morphism component is not even")]
    OddMorphism,
    #[error("ring morphism image of `{0}` has the wrong parity or a constant term")]
    BadImage(String),
    #[error("relation {0} is not respected by the ring morphism")]
    RelationViolated(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
