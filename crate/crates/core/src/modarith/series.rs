//! Truncated multivariate power series `(Z/p^N)[[T_1..T_r]] / (total degree >= D)`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;

use super::{ArithError, ResidueRing};

/// Exponent vectors of total degree `< cap`, in graded lexicographic order
/// (by total degree, then lexicographically with `T_1` most significant).
#[derive(Debug)]
pub struct MonomialBasis {
    vars: usize,
    cap: u32,
    exps: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    product: Vec<Option<u32>>,
}

impl MonomialBasis {
    pub fn new(vars: usize, cap: u32) -> Arc<Self> {
        assert!(vars >= 1, "at least one variable");
        let mut exps = Vec::new();
        for deg in 0..cap {
            let mut current = vec![0u32; vars];
            push_degree(&mut exps, &mut current, 0, deg);
        }
        let index: HashMap<Vec<u32>, usize> = exps
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        let n = exps.len();
        let mut product = vec![None; n * n];
        for i in 0..n {
            for j in 0..n {
                let sum: Vec<u32> = exps[i].iter().zip(&exps[j]).map(|(a, b)| a + b).collect();
                product[i * n + j] = index.get(&sum).map(|&k| k as u32);
            }
        }
        Arc::new(Self {
            vars,
            cap,
            exps,
            index,
            product,
        })
    }

    #[inline]
    pub fn vars(&self) -> usize {
        self.vars
    }

    #[inline]
    pub fn cap(&self) -> u32 {
        self.cap
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponents(&self, i: usize) -> &[u32] {
        &self.exps[i]
    }

    pub fn index_of(&self, exps: &[u32]) -> Option<usize> {
        self.index.get(exps).copied()
    }

    /// Index of the product monomial, or `None` when it is truncated away.
    #[inline]
    pub fn product_index(&self, i: usize, j: usize) -> Option<usize> {
        self.product[i * self.exps.len() + j].map(|k| k as usize)
    }

    fn same_shape(&self, other: &Self) -> bool {
        self.vars == other.vars && self.cap == other.cap
    }
}

// Lexicographic with T_1 most significant: larger leading exponents first.
fn push_degree(out: &mut Vec<Vec<u32>>, current: &mut [u32], pos: usize, remaining: u32) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(current.to_vec());
        return;
    }
    for e in (0..=remaining).rev() {
        current[pos] = e;
        push_degree(out, current, pos + 1, remaining - e);
    }
    current[pos] = 0;
}

#[derive(Clone)]
pub struct TruncatedSeries {
    ring: ResidueRing,
    basis: Arc<MonomialBasis>,
    coeffs: Vec<u64>,
}

impl PartialEq for TruncatedSeries {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring
            && self.basis.same_shape(&other.basis)
            && self.coeffs == other.coeffs
    }
}

impl Eq for TruncatedSeries {}

impl TruncatedSeries {
    pub fn zero(ring: ResidueRing, basis: &Arc<MonomialBasis>) -> Self {
        Self {
            ring,
            basis: Arc::clone(basis),
            coeffs: vec![0; basis.len()],
        }
    }

    pub fn constant(ring: ResidueRing, basis: &Arc<MonomialBasis>, c: u64) -> Self {
        let mut s = Self::zero(ring, basis);
        if !s.coeffs.is_empty() {
            s.coeffs[0] = ring.reduce_u64(c);
        }
        s
    }

    pub fn one(ring: ResidueRing, basis: &Arc<MonomialBasis>) -> Self {
        Self::constant(ring, basis, 1)
    }

    /// The variable `T_{var+1}` (zero-based `var`).
    pub fn variable(ring: ResidueRing, basis: &Arc<MonomialBasis>, var: usize) -> Self {
        assert!(var < basis.vars(), "variable index out of range");
        let mut e = vec![0; basis.vars()];
        e[var] = 1;
        Self::from_terms(ring, basis, &[(1, e)])
    }

    /// Builds a series from `(coefficient, exponents)` terms; terms of total
    /// degree `>= D` are dropped, repeated monomials accumulate.
    pub fn from_terms(
        ring: ResidueRing,
        basis: &Arc<MonomialBasis>,
        terms: &[(i64, Vec<u32>)],
    ) -> Self {
        let mut s = Self::zero(ring, basis);
        for (c, e) in terms {
            assert_eq!(e.len(), basis.vars(), "exponent vector length");
            if let Some(i) = basis.index_of(e) {
                s.coeffs[i] = ring.add(s.coeffs[i], ring.reduce_i64(*c));
            }
        }
        s
    }

    pub fn from_coeffs(ring: ResidueRing, basis: &Arc<MonomialBasis>, coeffs: Vec<u64>) -> Self {
        assert_eq!(coeffs.len(), basis.len(), "coefficient vector length");
        let coeffs = coeffs.into_iter().map(|c| ring.reduce_u64(c)).collect();
        Self {
            ring,
            basis: Arc::clone(basis),
            coeffs,
        }
    }

    /// One-variable series from its coefficient list `a_0, a_1, ...`.
    pub fn univariate(ring: ResidueRing, coeffs: &[u64]) -> Self {
        let basis = MonomialBasis::new(1, coeffs.len() as u32);
        Self::from_coeffs(ring, &basis, coeffs.to_vec())
    }

    #[inline]
    pub fn ring(&self) -> ResidueRing {
        self.ring
    }

    #[inline]
    pub fn basis(&self) -> &Arc<MonomialBasis> {
        &self.basis
    }

    #[inline]
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn vars(&self) -> usize {
        self.basis.vars()
    }

    pub fn degree_cap(&self) -> u32 {
        self.basis.cap()
    }

    pub fn coefficient(&self, exps: &[u32]) -> u64 {
        self.basis.index_of(exps).map_or(0, |i| self.coeffs[i])
    }

    pub fn constant_term(&self) -> u64 {
        self.coeffs.first().copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_unit(&self) -> bool {
        self.ring.is_unit(self.constant_term()) && !self.coeffs.is_empty()
    }

    /// Nonzero coefficients as `(coefficient, exponents)` pairs.
    pub fn terms(&self) -> Vec<(u64, Vec<u32>)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (c, self.basis.exponents(i).to_vec()))
            .collect()
    }

    fn check_compatible(&self, other: &Self) -> Result<(), ArithError> {
        if self.ring != other.ring || !self.basis.same_shape(&other.basis) {
            return Err(ArithError::Mismatch(format!(
                "{} in {} variables below degree {} vs {} in {} variables below degree {}",
                self.ring,
                self.vars(),
                self.degree_cap(),
                other.ring,
                other.vars(),
                other.degree_cap()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, ArithError> {
        self.check_compatible(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| self.ring.add(a, b))
            .collect();
        Ok(self.with_coeffs(coeffs))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ArithError> {
        self.check_compatible(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| self.ring.sub(a, b))
            .collect();
        Ok(self.with_coeffs(coeffs))
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|&a| self.ring.neg(a)).collect();
        self.with_coeffs(coeffs)
    }

    pub fn scale(&self, c: u64) -> Self {
        let c = self.ring.reduce_u64(c);
        let coeffs = self.coeffs.iter().map(|&a| self.ring.mul(a, c)).collect();
        self.with_coeffs(coeffs)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, ArithError> {
        self.check_compatible(other)?;
        let n = self.coeffs.len();
        let mut out = vec![0u64; n];
        for i in 0..n {
            let a = self.coeffs[i];
            if a == 0 {
                continue;
            }
            for j in 0..n {
                let b = other.coeffs[j];
                if b == 0 {
                    continue;
                }
                if let Some(k) = self.basis.product_index(i, j) {
                    out[k] = self.ring.add(out[k], self.ring.mul(a, b));
                }
            }
        }
        Ok(self.with_coeffs(out))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(self.ring, &self.basis);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same parent");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same parent");
            }
        }
        acc
    }

    /// Multiplicative inverse of a unit series.
    pub fn inverse(&self) -> Result<Self, ArithError> {
        let c0 = self.constant_term();
        let inv0 = self.ring.inv(c0)?;
        // f = c0 (1 - h) with h in the augmentation ideal; 1/(1-h) = sum h^j,
        // and h^D vanishes under the degree cap.
        let h = Self::one(self.ring, &self.basis).sub(&self.scale(inv0))?;
        let mut acc = Self::one(self.ring, &self.basis);
        let mut power = Self::one(self.ring, &self.basis);
        for _ in 1..self.degree_cap().max(1) {
            power = power.mul(&h)?;
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power)?;
        }
        Ok(acc.scale(inv0))
    }

    /// Evaluates the stored polynomial at `point`.
    ///
    /// This is a ring homomorphism on truncated series whenever every
    /// coordinate of `point` is divisible by `p` and `D >= N`: the discarded
    /// monomials then evaluate to multiples of `p^D`.
    pub fn eval(&self, point: &[u64]) -> Result<u64, ArithError> {
        if point.len() != self.vars() {
            return Err(ArithError::Mismatch(format!(
                "evaluation point has {} coordinates, series has {} variables",
                point.len(),
                self.vars()
            )));
        }
        let ring = self.ring;
        let mut acc = 0;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mut term = c;
            for (&x, &e) in point.iter().zip(self.basis.exponents(i)) {
                term = ring.mul(term, ring.pow(x, e as u64));
            }
            acc = ring.add(acc, term);
        }
        Ok(acc)
    }

    /// `omega_n(T_var) = (1 + T_var)^{p^n} - 1`.
    pub fn omega(ring: ResidueRing, basis: &Arc<MonomialBasis>, n: u32, var: usize) -> Self {
        let binoms = binomials_of_p_power(ring, n, basis.cap());
        let terms: Vec<(i64, Vec<u32>)> = binoms
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, &c)| (c as i64, unit_exps(basis.vars(), var, j as u32)))
            .collect();
        Self::from_terms(ring, basis, &terms)
    }

    /// `nu_n(T_var) = omega_n(T_var) / T_var`.
    pub fn nu(ring: ResidueRing, basis: &Arc<MonomialBasis>, n: u32, var: usize) -> Self {
        let binoms = binomials_of_p_power(ring, n, basis.cap() + 1);
        let terms: Vec<(i64, Vec<u32>)> = binoms
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, &c)| (c as i64, unit_exps(basis.vars(), var, j as u32 - 1)))
            .collect();
        Self::from_terms(ring, basis, &terms)
    }

    fn with_coeffs(&self, coeffs: Vec<u64>) -> Self {
        Self {
            ring: self.ring,
            basis: Arc::clone(&self.basis),
            coeffs,
        }
    }
}

fn unit_exps(vars: usize, var: usize, e: u32) -> Vec<u32> {
    let mut v = vec![0; vars];
    v[var] = e;
    v
}

/// `C(p^n, j) mod p^N` for `j < count`, computed exactly.
fn binomials_of_p_power(ring: ResidueRing, n: u32, count: u32) -> Vec<u64> {
    let top = BigUint::from(ring.p()).pow(n);
    let modulus = BigUint::from(ring.modulus());
    let mut out = Vec::with_capacity(count as usize);
    let mut c = BigUint::one();
    for j in 0..count {
        if j > 0 {
            if BigUint::from(j) > top {
                c = BigUint::from(0u32);
            } else {
                c = c * (&top - BigUint::from(j - 1)) / BigUint::from(j);
            }
        }
        let r = &c % &modulus;
        out.push(r.iter_u64_digits().next().unwrap_or(0));
    }
    out
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (c, e)) in terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (v, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*T{}", v + 1)?,
                    _ => write!(f, "*T{}^{}", v + 1, k)?,
                }
            }
        }
        write!(f, " (mod {}, deg < {})", self.ring, self.degree_cap())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring(p: u64, n: u32) -> ResidueRing {
        ResidueRing::new(p, n).unwrap()
    }

    #[test]
    fn basis_order_and_size() {
        let b = MonomialBasis::new(2, 3);
        let exps: Vec<Vec<u32>> = (0..b.len()).map(|i| b.exponents(i).to_vec()).collect();
        assert_eq!(
            exps,
            vec![
                vec![0, 0],
                vec![1, 0],
                vec![0, 1],
                vec![2, 0],
                vec![1, 1],
                vec![0, 2]
            ]
        );
        assert_eq!(MonomialBasis::new(2, 12).len(), 78);
        assert_eq!(MonomialBasis::new(3, 4).len(), 20);
    }

    #[test]
    fn one_plus_t_times_one_minus_t() {
        let r = ring(7, 2);
        let b = MonomialBasis::new(1, 3);
        let t = TruncatedSeries::variable(r, &b, 0);
        let one = TruncatedSeries::one(r, &b);
        let prod = one.add(&t).unwrap().mul(&one.sub(&t).unwrap()).unwrap();
        let expected = TruncatedSeries::from_terms(r, &b, &[(1, vec![0]), (-1, vec![2])]);
        assert_eq!(prod, expected);
    }

    #[test]
    fn omega_one_mod_25() {
        let r = ring(5, 2);
        let b = MonomialBasis::new(1, 3);
        let w = TruncatedSeries::omega(r, &b, 1, 0);
        assert_eq!(w.coeffs(), &[0, 5, 10]);
        assert_eq!(w.eval(&[0]).unwrap(), 0);
    }

    #[test]
    fn nu_times_t_is_omega() {
        let r = ring(3, 3);
        let b = MonomialBasis::new(2, 10);
        for n in 0..3 {
            let w = TruncatedSeries::omega(r, &b, n, 1);
            let v = TruncatedSeries::nu(r, &b, n, 1);
            let t = TruncatedSeries::variable(r, &b, 1);
            assert_eq!(v.mul(&t).unwrap(), w, "n = {n}");
        }
        let nu0 = TruncatedSeries::nu(r, &b, 0, 0);
        assert_eq!(nu0, TruncatedSeries::one(r, &b));
    }

    #[test]
    fn omega_matches_repeated_powering() {
        let r = ring(3, 4);
        let b = MonomialBasis::new(1, 20);
        let one_plus_t = TruncatedSeries::one(r, &b)
            .add(&TruncatedSeries::variable(r, &b, 0))
            .unwrap();
        let direct = one_plus_t
            .pow(27)
            .sub(&TruncatedSeries::one(r, &b))
            .unwrap();
        assert_eq!(TruncatedSeries::omega(r, &b, 3, 0), direct);
    }

    #[test]
    fn mismatched_parents_are_rejected() {
        let a = TruncatedSeries::one(ring(5, 2), &MonomialBasis::new(1, 3));
        let b = TruncatedSeries::one(ring(5, 3), &MonomialBasis::new(1, 3));
        let c = TruncatedSeries::one(ring(5, 2), &MonomialBasis::new(2, 3));
        assert!(a.add(&b).is_err());
        assert!(a.mul(&c).is_err());
        assert!(a.eval(&[0, 0]).is_err());
    }

    #[test]
    fn inverse_of_unit() {
        let r = ring(5, 3);
        let b = MonomialBasis::new(2, 6);
        let f = TruncatedSeries::from_terms(
            r,
            &b,
            &[(2, vec![0, 0]), (3, vec![1, 0]), (7, vec![1, 2])],
        );
        let g = f.inverse().unwrap();
        assert_eq!(f.mul(&g).unwrap(), TruncatedSeries::one(r, &b));
        let t = TruncatedSeries::variable(r, &b, 0);
        assert!(t.inverse().is_err());
    }

    fn arb_series(r: ResidueRing, b: Arc<MonomialBasis>) -> impl Strategy<Value = TruncatedSeries> {
        prop::collection::vec(0..r.modulus(), b.len())
            .prop_map(move |c| TruncatedSeries::from_coeffs(r, &b, c))
    }

    proptest! {
        #[test]
        fn ring_axioms(
            (f, g, h) in {
                let r = ResidueRing::new(3, 2).unwrap();
                let b = MonomialBasis::new(2, 4);
                (arb_series(r, b.clone()), arb_series(r, b.clone()), arb_series(r, b))
            }
        ) {
            prop_assert_eq!(f.mul(&g).unwrap(), g.mul(&f).unwrap());
            prop_assert_eq!(f.mul(&g).unwrap().mul(&h).unwrap(), f.mul(&g.mul(&h).unwrap()).unwrap());
            prop_assert_eq!(
                f.mul(&g.add(&h).unwrap()).unwrap(),
                f.mul(&g).unwrap().add(&f.mul(&h).unwrap()).unwrap()
            );
            prop_assert_eq!(f.add(&g).unwrap().sub(&g).unwrap(), f.clone());
        }

        #[test]
        fn evaluation_is_a_homomorphism_on_p_divisible_points(
            (f, g) in {
                let r = ResidueRing::new(3, 3).unwrap();
                let b = MonomialBasis::new(2, 4);
                (arb_series(r, b.clone()), arb_series(r, b))
            },
            x in 0u64..9,
            y in 0u64..9,
        ) {
            let point = [3 * x % 27, 3 * y % 27];
            let r = f.ring();
            let fg = f.mul(&g).unwrap().eval(&point).unwrap();
            prop_assert_eq!(fg, r.mul(f.eval(&point).unwrap(), g.eval(&point).unwrap()));
            let fpg = f.add(&g).unwrap().eval(&point).unwrap();
            prop_assert_eq!(fpg, r.add(f.eval(&point).unwrap(), g.eval(&point).unwrap()));
        }
    }
}
