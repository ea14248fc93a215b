use thiserror::Error;

/// Errors for the whole library. Operations that "reject" an input per their
/// contract do so with a distinct variant so callers can branch on the cause.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} is too small here (need p >= {1})")]
    PrimeTooSmall(u64, u64),
    #[error("prime {p} is {} (mod 3); need p = 1 (mod 3)", p % 3)]
    WrongResidueClass { p: u64 },
    #[error("{0} is not cube-free")]
    NotCubeFree(u64),
    #[error("n = {0} is degenerate for this family (torsion appears); n >= 3 required")]
    DegenerateN(u64),
    #[error("p = {p} divides 6n = {six_n}: bad reduction prime")]
    BadReductionPrime { p: u64, six_n: u64 },
    #[error("point is not on the curve")]
    PointNotOnCurve,
    #[error("arithmetic overflow on input {0}")]
    Overflow(String),
    #[error("torsion bound inconclusive: gcd of reduction orders keeps prime factor {0}")]
    InconclusiveTorsion(u64),
    #[error("root number inconclusive: variance ratio {0:.3e} exceeds the separation threshold")]
    InconclusiveRootNumber(f64),
    #[error("q = {q} is not 1 (mod p = {p}): no degree-p subfield of Q(mu_q)")]
    QNotOneModP { q: u64, p: u64 },
    #[error("p = {p} is not in the admissible set S for n = {n}")]
    PrimeNotAdmissible { p: u64, n: u64 },
    #[error("sigma must contain at least one ramified prime")]
    EmptySigma,
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
