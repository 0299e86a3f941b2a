use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("modulus {0} is too large for matrix storage")]
    ModulusTooLarge(u32),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("x^2 + x + {} is reducible over F_{p}; F_{p}[w] is not a field", .p - 1)]
    ReducibleModulus { p: u32 },
    #[error("p = {0} does not satisfy p = 2 or 3 (mod 5); the construction needs x^2 + x + (p-1) irreducible over F_p")]
    NotConstructionPrime(u32),
    #[error("shape mismatch: expected {expected:?}, got {got:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("vector length {0} is odd; phi consumes coordinates in pairs")]
    OddLength(usize),
    #[error("a code needs at least two words to have a minimum distance")]
    TooFewWords,
    #[error("operation requires a linear code")]
    NonLinear,
    #[error("linear code has {0} words, which is not a power of p")]
    NotPowerOfP(usize),
    #[error("minimum pairwise rank distance {pairwise} differs from minimum nonzero rank {min_nonzero}")]
    DistanceInconsistent { pairwise: usize, min_nonzero: usize },
    #[error("minimum distance {0} outside 1..={1}")]
    DistanceOutOfRange(usize, usize),
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("dimension {k} exceeds ambient dimension {n}")]
    DimensionTooLarge { n: usize, k: usize },
    #[error("mixed dimensions in a constant-dimension code")]
    MixedDimensions,
    #[error("invalid anticode parameters: {0}")]
    BadBoundParameters(String),
    #[error("anticode bound quotient is not an integer")]
    NonIntegralBound,
    #[error("size guard exceeded: {needed} > {cap}")]
    GuardExceeded { needed: u128, cap: u128 },
    #[error("check `{check}` does not apply to {what}")]
    Inapplicable { check: String, what: String },
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
