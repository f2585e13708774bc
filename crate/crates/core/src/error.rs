use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("denominator constant term is {constant}, expected 1")]
    UnnormalizedDenominator { constant: BigInt },
    #[error("threshold k must be positive, got {0}")]
    InvalidThreshold(i64),
    #[error("ell = {ell} exceeds the configured cap {cap}")]
    EllTooLarge { ell: u32, cap: u32 },
    #[error("{0} is undefined at n = 0")]
    UndefinedAtZero(&'static str),
    #[error("n = {n} exceeds the enumeration cap {cap}")]
    OracleCap { n: usize, cap: usize },
}
