//! Iwasawa-theoretic certification of Greenberg's conjecture for individual
//! primes, and finite-precision homological algebra over truncated Iwasawa
//! algebras.

pub mod irregular;
pub mod lambda_mod;
pub mod lfunc;
pub mod modarith;
pub mod vandiver;
