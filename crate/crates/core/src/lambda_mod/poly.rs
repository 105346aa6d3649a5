//! Exact integer polynomials in `T_1..T_r`, kept separate from any precision
//! so that relations can be re-read at several `(N, D)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::modarith::primes::{mul_mod, pow_mod};
use crate::modarith::{MonomialBasis, ResidueRing, TruncatedSeries};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    vars: usize,
    terms: BTreeMap<Vec<u32>, i128>,
}

impl Poly {
    pub fn zero(vars: usize) -> Self {
        Self {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, c: i64) -> Self {
        Self::from_terms(vars, &[(c, vec![0; vars])])
    }

    /// `T_{var+1}` (zero-based `var`).
    pub fn var(vars: usize, var: usize) -> Self {
        let mut e = vec![0; vars];
        e[var] = 1;
        Self::from_terms(vars, &[(1, e)])
    }

    pub fn from_terms(vars: usize, terms: &[(i64, Vec<u32>)]) -> Self {
        let mut p = Self::zero(vars);
        for (c, e) in terms {
            assert_eq!(e.len(), vars, "exponent vector length");
            p.add_term(*c as i128, e.clone());
        }
        p
    }

    fn add_term(&mut self, c: i128, e: Vec<u32>) {
        let slot = self.terms.entry(e).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.terms.retain(|_, v| *v != 0);
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &i128)> {
        self.terms.iter()
    }

    pub fn constant_term(&self) -> i128 {
        self.terms.get(&vec![0; self.vars]).copied().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(c, e.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, c: i64) -> Self {
        let mut out = Self::zero(self.vars);
        if c != 0 {
            for (e, &v) in &self.terms {
                out.terms.insert(e.clone(), v * c as i128);
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.vars);
        for (e1, &c1) in &self.terms {
            for (e2, &c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(c1 * c2, e);
            }
        }
        out
    }

    /// Value at `point` modulo the prime `q`.
    pub fn eval_mod(&self, point: &[u64], q: u64) -> u64 {
        self.terms.iter().fold(0, |acc, (e, &c)| {
            let c = c.rem_euclid(q as i128) as u64;
            let mono = e
                .iter()
                .zip(point)
                .fold(c, |m, (&k, &x)| mul_mod(m, pow_mod(x, k as u64, q), q));
            (acc + mono) % q
        })
    }

    /// Image in `(Z/p^N)[[T]]` truncated below total degree `D`.
    pub fn to_series(&self, ring: ResidueRing, basis: &Arc<MonomialBasis>) -> TruncatedSeries {
        let mut coeffs = vec![0u64; basis.len()];
        for (e, &c) in &self.terms {
            if let Some(i) = basis.index_of(e) {
                coeffs[i] = ring.add(coeffs[i], ring.reduce_i128(c));
            }
        }
        TruncatedSeries::from_coeffs(ring, basis, coeffs)
    }

    /// Coefficients in the group ring `Z[S_1..S_r] / (S_i^{m} - 1)` under
    /// `T_i = S_i - 1`, indexed by `sum_i k_i m^i` for `S^k`.
    pub fn group_ring_coeffs(&self, m: u64) -> Vec<i128> {
        let size = (m as usize).pow(self.vars as u32);
        let mut out = vec![0i128; size];
        for (e, &c) in &self.terms {
            // prod_i (S_i - 1)^{e_i}
            let mut partial: Vec<(usize, i128)> = vec![(0, c)];
            let mut stride = 1usize;
            for &ei in e {
                let mut next = Vec::new();
                let mut binom: i128 = 1;
                for k in 0..=ei {
                    if k > 0 {
                        binom = binom * (ei - k + 1) as i128 / k as i128;
                    }
                    let sign = if (ei - k) % 2 == 0 { 1 } else { -1 };
                    let shift = (k as u64 % m) as usize * stride;
                    for &(idx, v) in &partial {
                        next.push((idx + shift, v * binom * sign));
                    }
                }
                partial = next;
                stride *= m as usize;
            }
            for (idx, v) in partial {
                out[idx] += v;
            }
        }
        out
    }
}
