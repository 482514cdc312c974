use thiserror::Error;

/// Errors raised by the algebra, descent and experiment layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field specification: {0}")]
    InvalidField(String),
    #[error("operands belong to different fields ({0} vs {1})")]
    FieldMismatch(String, String),
    #[error("value 0x{value:x} does not fit into {n} bits")]
    ElementOutOfRange { value: u64, n: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("t^2 + t = a has no solution (absolute trace of a is 1)")]
    NoArtinSchreierSolution,
    #[error("polynomials live in different rings")]
    RingMismatch,
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix too large for determinant expansion ({0}x{0}, limit 12)")]
    MatrixTooLarge(usize),
    #[error("zero polynomial is not a valid resultant input")]
    ZeroPolynomial,
    #[error("exponent overflow in monomial arithmetic")]
    ExponentOverflow,
    #[error("summation polynomial arity {0} outside supported range 2..=6")]
    ArityOutOfRange(usize),
    #[error("a6 must be nonzero for an ordinary curve")]
    ZeroA6,
    #[error("point is not on the curve")]
    PointNotOnCurve,
    #[error("subspace basis is linearly dependent over F2")]
    DependentBasis,
    #[error("the constant c must be nonzero")]
    ZeroConstant,
    #[error("subspace dimension {np} exceeds field degree {n}")]
    SubspaceTooLarge { np: usize, n: usize },
    #[error("{0} Boolean variables exceed the 64-variable limit")]
    TooManyVariables(usize),
    #[error("polynomial system is identically zero")]
    AllZeroSystem,
    #[error("witness needs n' >= m >= 3 (got m={m}, n'={np})")]
    WitnessHypothesis { m: usize, np: usize },
    #[error("step log is empty")]
    EmptyLog,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
