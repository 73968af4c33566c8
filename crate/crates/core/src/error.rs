use alloc::string::String;
use alloc::vec::Vec;
use num_bigint::BigUint;

use crate::exact::PrimeFactor;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("factorization budget exhausted; unfactored cofactor {cofactor}")]
    FactorBudget { partial: Vec<PrimeFactor>, cofactor: BigUint },
    #[error("argument encloses a pole")]
    Pole,
    #[error("no convergence: reached {achieved:e}, requested {requested:e}")]
    NonConvergence { achieved: f64, requested: f64 },
    #[error("root is not simple modulo p")]
    NonSimpleRoot,
    #[error("residue is not a root modulo p")]
    NotARoot,
    #[error("denominator divisible by p = {0}")]
    DenominatorDivisibleByP(u64),
    #[error("no cusp eigenform is determined uniquely in weight {0}")]
    UnsupportedWeight(u32),
    #[error("missing Hecke eigenvalues at primes {0:?}")]
    MissingPrimes(Vec<u64>),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("tail bound {tail:e} dominates the requested radius {target:e}")]
    TailDominates { tail: f64, target: f64 },
    #[error("functional equation inconsistent: relative residual {residual:e}")]
    Inconsistent { residual: f64 },
    #[error("parity mismatch: character parity does not match (-1)^{n}")]
    ParityMismatch { n: i64 },
    #[error("p = {0} divides the conductor")]
    PrimeDividesConductor(u64),
    #[error("s = {0} is not a critical point")]
    NonCritical(i64),
    #[error("form is not ordinary at p = {0}")]
    NonOrdinary(u64),
    #[error("no witness found: {0}")]
    NoWitness(String),
    #[error("group closure exceeds {0} elements")]
    GroupTooLarge(usize),
    #[error("{0} does not divide {1}")]
    Divisibility(String, String),
    #[error("invalid character: {0}")]
    InvalidCharacter(String),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
}
