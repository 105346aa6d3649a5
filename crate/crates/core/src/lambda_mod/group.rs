use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

/// A finitely generated abelian `p`-group up to isomorphism:
/// `Z_p^free_rank + sum_i Z/p^{e_i}` with `e_i` ascending and positive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyGroup {
    pub p: u64,
    pub exponents: Vec<u32>,
    #[serde(default)]
    pub free_rank: usize,
}

impl CohomologyGroup {
    pub fn zero(p: u64) -> Self {
        Self::finite(p, Vec::new())
    }

    pub fn finite(p: u64, mut exponents: Vec<u32>) -> Self {
        exponents.retain(|&e| e > 0);
        exponents.sort_unstable();
        Self {
            p,
            exponents,
            free_rank: 0,
        }
    }

    pub fn with_free_rank(mut self, free_rank: usize) -> Self {
        self.free_rank = free_rank;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.exponents.is_empty() && self.free_rank == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// `log_p |G|`, or `None` for an infinite group.
    pub fn log_order(&self) -> Option<u64> {
        self.is_finite()
            .then(|| self.exponents.iter().map(|&e| e as u64).sum())
    }

    pub fn order(&self) -> Option<BigUint> {
        self.log_order()
            .map(|l| BigUint::from(self.p).pow(l as u32))
    }

    /// Number of cyclic summands, i.e. `dim_{F_p} G / pG`.
    pub fn rank(&self) -> usize {
        self.exponents.len() + self.free_rank
    }

    /// `log_p |G / p^n G|`.
    pub fn log_quotient(&self, n: u32) -> u64 {
        self.exponents.iter().map(|&e| e.min(n) as u64).sum::<u64>()
            + n as u64 * self.free_rank as u64
    }

    /// `log_p |G[p^n]|`.
    pub fn log_torsion(&self, n: u32) -> u64 {
        self.exponents.iter().map(|&e| e.min(n) as u64).sum()
    }

    /// The invariant factors `p^{e_i}`.
    pub fn invariant_factors(&self) -> Vec<BigUint> {
        self.exponents
            .iter()
            .map(|&e| BigUint::from(self.p).pow(e))
            .collect()
    }
}

impl fmt::Display for CohomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self
            .exponents
            .iter()
            .map(|&e| {
                if e == 1 {
                    format!("Z/{}", self.p)
                } else {
                    format!("Z/{}^{}", self.p, e)
                }
            })
            .collect();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 {
                format!("Z_{}", self.p)
            } else {
                format!("Z_{}^{}", self.p, self.free_rank)
            });
        }
        write!(f, "{}", parts.join(" + "))
    }
}
