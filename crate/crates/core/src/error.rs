use alloc::boxed::Box;
use alloc::string::String;

/// Errors raised anywhere in the core crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("{0} is not an odd prime below 2^31")]
    NotOddPrime(u64),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),

    #[error("f must be monic")]
    NotMonic,
    #[error("f has even degree {0}; only odd-degree models are supported")]
    EvenDegree(usize),
    #[error("f has degree {0}; genus must be at least 1")]
    DegreeTooSmall(usize),
    #[error("f is not squarefree (discriminant is zero)")]
    NotSquarefree,
    #[error("bad reduction at p = {0}")]
    BadPrime(u64),
    #[error("point is not on the curve")]
    NotOnCurve,

    #[error("invalid Mumford divisor: {0}")]
    InvalidDivisor(&'static str),
    #[error("{what} too large: {size} exceeds limit {limit}")]
    TooLarge {
        what: &'static str,
        size: u128,
        limit: u128,
    },
    #[error("genus {0} is not supported by the zeta-function order formula")]
    UnsupportedGenus(usize),
    #[error("inconsistent point counts at p = {0}")]
    InconsistentCounts(u64),
    #[error("group structure computation failed at p = {p}: {reason}")]
    StructureFailure { p: u64, reason: &'static str },
    #[error("denominator divisible by p = {0}")]
    DenominatorAtP(u64),
    #[error("divisor does not reduce to a valid divisor mod {0}")]
    InvalidReduction(u64),
    #[error("element is not torsion within order bound {0}")]
    NotTorsion(u64),

    #[error("could not factor {0}")]
    FactorizationFailure(u64),
    #[error("argument {0} out of range")]
    OutOfRange(String),

    #[error("prime {p} skipped: {reason}")]
    SkipPrime { p: u64, reason: Box<Error> },
    #[error("sieve state explosion: {size} candidate classes exceed cap {cap}")]
    StateExplosion { size: u128, cap: u128 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(&'static str),
    #[error("no primes available for the experiment")]
    InsufficientPrimes,
}

pub type Result<T> = core::result::Result<T, Error>;
