//! Exact arithmetic kernels: residue rings `Z/p^N`, word-size primes,
//! big-rational Bernoulli numbers, truncated power series and normal-form
//! linear algebra.

pub mod bernoulli;
pub mod linalg;
pub mod primes;
pub mod residue;
pub mod series;
pub mod smith;

pub use bernoulli::{bernoulli_table, bigrational_bernoulli};
pub use linalg::{howell_basis, howell_form, local_smith, ModMatrix};
pub use residue::ResidueRing;
pub use series::{MonomialBasis, TruncatedSeries};
pub use smith::{smith_form, SmithForm};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("precision must be at least 1")]
    ZeroPrecision,
    #[error("modulus {p}^{prec} does not fit the word-size residue ring")]
    ModulusTooLarge { p: u64, prec: u32 },
    #[error("{value} is not a unit modulo {modulus}")]
    NonUnit { value: u64, modulus: u64 },
    #[error("mismatched operands: {0}")]
    Mismatch(String),
}
