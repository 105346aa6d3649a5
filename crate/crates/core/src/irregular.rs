//! Bernoulli numbers modulo `p^N`, irregular indices, index of irregularity.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::modarith::primes::{is_prime, primes_up_to};
use crate::modarith::{bigrational_bernoulli, ArithError, ResidueRing};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IrregularError {
    #[error("B_{m} is not {p}-integral: ({p} - 1) divides {m}")]
    NonIntegral { p: u64, m: u64 },
    #[error(transparent)]
    Arith(#[from] ArithError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrregularityRecord {
    pub p: u64,
    pub indices: Vec<u64>,
    pub index_of_irregularity: usize,
}

impl IrregularityRecord {
    pub fn is_regular(&self) -> bool {
        self.indices.is_empty()
    }
}

/// `B_m mod p^N` for `p`-integral `B_m`.
///
/// For `m <= p - 2` the recursion on `b_j = B_j / j!` only divides by
/// factorials below `p`, which are units; larger `m` go through the exact
/// rational value.
pub fn bernoulli_mod(p: u64, prec: u32, m: u64) -> Result<u64, IrregularError> {
    let ring = ResidueRing::new(p, prec)?;
    if m == 0 {
        return Ok(1 % ring.modulus());
    }
    if m.is_multiple_of(p - 1) {
        return Err(IrregularError::NonIntegral { p, m });
    }
    if m > 1 && m % 2 == 1 {
        return Ok(0);
    }
    if m <= p - 2 {
        let table = bernoulli_mod_table(ring, m as usize);
        return Ok(table[m as usize]);
    }
    Ok(ring.reduce_rational(&bigrational_bernoulli(m as usize))?)
}

/// `B_0, ..., B_{m_max} mod p^N` by the unit-denominator recursion.
/// Requires `m_max <= p - 2`.
pub fn bernoulli_mod_table(ring: ResidueRing, m_max: usize) -> Vec<u64> {
    let p = ring.p() as usize;
    assert!(m_max + 2 <= p, "recursion needs m_max <= p - 2");
    // inverse factorials 0! .. (m_max + 1)!
    let mut fact = vec![1u64; m_max + 2];
    for i in 1..m_max + 2 {
        fact[i] = ring.mul(fact[i - 1], i as u64);
    }
    let mut inv_fact = vec![0u64; m_max + 2];
    inv_fact[m_max + 1] = ring
        .inv(fact[m_max + 1])
        .expect("factorials below p are units");
    for i in (0..m_max + 1).rev() {
        inv_fact[i] = ring.mul(inv_fact[i + 1], i as u64 + 1);
    }
    // b_m = -sum_{j<m} b_j / (m + 1 - j)!, only j = 1 and even j contribute.
    let mut b = vec![0u64; m_max + 1];
    b[0] = 1 % ring.modulus();
    if m_max >= 1 {
        b[1] = ring.neg(inv_fact[2]);
    }
    for m in (2..=m_max).step_by(2) {
        let mut acc = ring.mul(b[1], inv_fact[m]);
        for j in (0..m).step_by(2) {
            acc = ring.add(acc, ring.mul(b[j], inv_fact[m + 1 - j]));
        }
        b[m] = ring.neg(acc);
    }
    (0..=m_max).map(|m| ring.mul(b[m], fact[m])).collect()
}

/// Even `k` in `[2, p - 3]` with `p | B_k`.
pub fn irregular_indices(p: u64) -> Result<IrregularityRecord, IrregularError> {
    let ring = ResidueRing::new(p, 1)?;
    let indices: Vec<u64> = if p < 5 {
        Vec::new()
    } else {
        let table = bernoulli_mod_table(ring, p as usize - 3);
        (2..=p - 3)
            .step_by(2)
            .filter(|&k| table[k as usize] == 0)
            .collect()
    };
    Ok(IrregularityRecord {
        p,
        index_of_irregularity: indices.len(),
        indices,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularScan {
    pub regular: usize,
    pub total: usize,
    pub fraction: f64,
    pub irregular: Vec<u64>,
}

/// Counts regular primes among the odd primes `<= p_max`.
pub fn scan_regular_fraction(p_max: u64) -> RegularScan {
    let primes: Vec<u64> = primes_up_to(p_max).into_iter().filter(|&p| p > 2).collect();
    let irregular: Vec<u64> = primes
        .par_iter()
        .filter(|&&p| !irregular_indices(p).expect("odd prime").is_regular())
        .copied()
        .collect();
    let total = primes.len();
    let regular = total - irregular.len();
    RegularScan {
        regular,
        total,
        fraction: if total == 0 {
            0.0
        } else {
            regular as f64 / total as f64
        },
        irregular,
    }
}

/// True when `p` is an odd prime.
pub fn is_odd_prime(p: u64) -> bool {
    p > 2 && is_prime(p)
}
