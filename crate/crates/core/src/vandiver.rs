//! Vandiver certification at an irregular pair `(p, k)` by the `p`-th power
//! test on cyclotomic units reduced into `F_q`, `q = 1 (mod p)`.
//!
//! The test unit is the real unit
//! `u_k = prod_{a=1}^{(p-1)/2} (zeta^{a/2} - zeta^{-a/2})^{c_a}`, `c_a = a^{p-1-k} mod p`,
//! where `a/2` is taken modulo `p`. Up to sign it equals
//! `prod (1 - zeta^a)^{c_a}` times `zeta^{-s/2}` with `s = sum a c_a`, and
//! that root of unity is a `p`-th power in `F_q` only when `p^2 | q - 1`;
//! the symmetric form removes the dependence.

use serde::{Deserialize, Serialize};

use crate::irregular::{irregular_indices, is_odd_prime, IrregularError};
use crate::modarith::primes::{is_prime, mul_mod, pow_mod};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VandiverError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("k = {k} is not an even index in [2, {p} - 3]")]
    BadIndex { p: u64, k: u64 },
    #[error("witness {q} is not a prime congruent to 1 mod {p}")]
    BadWitness { p: u64, q: u64 },
    #[error(transparent)]
    Irregular(#[from] IrregularError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum VandiverStatus {
    Holds,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub q: u64,
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VandiverOutcome {
    pub p: u64,
    pub k: u64,
    pub witnesses: Vec<Witness>,
    pub status: VandiverStatus,
}

fn check_pair(p: u64, k: u64, q: u64) -> Result<(), VandiverError> {
    if !is_odd_prime(p) {
        return Err(VandiverError::NotOddPrime(p));
    }
    if k % 2 == 1 || k < 2 || k + 3 > p {
        return Err(VandiverError::BadIndex { p, k });
    }
    if q % p != 1 || !is_prime(q) {
        return Err(VandiverError::BadWitness { p, q });
    }
    Ok(())
}

/// The fixed primitive `p`-th root of unity in `F_q`: `x^{(q-1)/p}` for the
/// least `x >= 2` giving a nontrivial value.
pub fn root_of_unity(p: u64, q: u64) -> u64 {
    let m = (q - 1) / p;
    (2..q)
        .map(|x| pow_mod(x, m, q))
        .find(|&z| z != 1)
        .expect("F_q* has order divisible by p")
}

/// True when `u_k` is not a `p`-th power in `F_q`, which certifies Vandiver at `(p, k)`.
pub fn vandiver_test(p: u64, k: u64, q: u64) -> Result<bool, VandiverError> {
    check_pair(p, k, q)?;
    Ok(test_with_root(p, q, root_of_unity(p, q), |a| {
        pow_mod(a, p - 1 - k, p)
    }))
}

/// The test with an explicit root `zeta` and exponent rule `a -> c_a`.
pub fn test_with_root(p: u64, q: u64, zeta: u64, exponent: impl Fn(u64) -> u64) -> bool {
    let u = test_unit(p, q, zeta, exponent);
    pow_mod(u, (q - 1) / p, q) != 1
}

fn test_unit(p: u64, q: u64, zeta: u64, exponent: impl Fn(u64) -> u64) -> u64 {
    let half = p.div_ceil(2);
    let mut powers = Vec::with_capacity(p as usize);
    let mut z = 1u64;
    for _ in 0..p {
        powers.push(z);
        z = mul_mod(z, zeta, q);
    }
    let mut u = 1u64;
    for a in 1..=(p - 1) / 2 {
        let e = (a * half % p) as usize;
        let base = (powers[e] + q - powers[(p as usize - e) % p as usize]) % q;
        u = mul_mod(u, pow_mod(base, exponent(a), q), q);
    }
    u
}

/// Witness primes `q = 2mp + 1`, `m = 1, 2, ...`.
pub fn witness_primes(p: u64) -> impl Iterator<Item = u64> {
    (1u64..)
        .map(move |m| 2 * m * p + 1)
        .filter(|&q| is_prime(q))
}

/// Tests the first `budget` witnesses until one certifies.
pub fn vandiver_outcome(p: u64, k: u64, budget: usize) -> Result<VandiverOutcome, VandiverError> {
    let mut witnesses = Vec::new();
    for q in witness_primes(p).take(budget) {
        let certified = vandiver_test(p, k, q)?;
        witnesses.push(Witness { q, certified });
        if certified {
            break;
        }
    }
    let status = if witnesses.iter().any(|w| w.certified) {
        VandiverStatus::Holds
    } else {
        VandiverStatus::Inconclusive
    };
    Ok(VandiverOutcome {
        p,
        k,
        witnesses,
        status,
    })
}

/// One outcome per irregular index of `p`; empty for regular `p`.
pub fn vandiver_status(p: u64, budget: usize) -> Result<Vec<VandiverOutcome>, VandiverError> {
    if !is_odd_prime(p) {
        return Err(VandiverError::NotOddPrime(p));
    }
    irregular_indices(p)?
        .indices
        .into_iter()
        .map(|k| vandiver_outcome(p, k, budget))
        .collect()
}
