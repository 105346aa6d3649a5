//! Characteristic power series of the `omega^{1-k}` eigenspace along the
//! cyclotomic `Z_p`-extension, as the `p`-adic L-series
//! `g(T)` with `g((1+p)^{1-m} - 1) = -(1 - p^{m-1}) B_m / m` for `m = k (mod p-1)`.
//!
//! Construction at level `n` (working modulus `M = p^{n+1}`): the
//! `c`-regularized Stickelberger sum over units `a mod M`, with the `omega^{k-1}`
//! twist, is collected by the `gamma`-exponent `e(a) = -log_{1+p} <a>` into
//! `H(T) = sum_e W_e (1+T)^e`; dividing by the regularization factor
//! `1 - omega^k(c) <c> (1+T)^{-log <c>}` gives `g`. The coordinate is `T = gamma - 1`
//! with `gamma` acting as `1 + p` on `p`-power roots of unity.
//!
//! Accuracy: `g(0)` is exact modulo `p^{n+1}`, `a_1` modulo `p^n`, and every
//! coefficient of index `< p^n` modulo `p`; evaluations at points of positive
//! valuation are exact modulo `p^{n+1}`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::irregular::{bernoulli_mod, irregular_indices, is_odd_prime, IrregularError};
use crate::modarith::primes::primitive_root;
use crate::modarith::{ArithError, ResidueRing, TruncatedSeries};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LfuncError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("({p}, {k}) is not an irregular pair")]
    NotIrregular { p: u64, k: u64 },
    #[error("{0} is regular: no irregular eigenspace")]
    Regular(u64),
    #[error("invalid parameters: {0}")]
    Parameters(String),
    #[error(transparent)]
    Irregular(#[from] IrregularError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharSeries {
    pub p: u64,
    pub k: u64,
    pub level: u32,
    pub precision: u32,
    pub degree_cap: u32,
    pub g: TruncatedSeries,
    pub mu: u32,
    pub lambda: u32,
    pub c_mod_p: Option<u64>,
}

impl CharSeries {
    pub fn coefficients(&self) -> &[u64] {
        self.g.coeffs()
    }
}

/// Builds `g` for the irregular pair `(p, k)` at level `n`, reduced modulo
/// `(p^N, T^D)`. Requires `1 <= N <= n + 1` and `N <= D <= p^n`.
pub fn char_series(
    p: u64,
    k: u64,
    n: u32,
    prec: u32,
    degree_cap: u32,
) -> Result<CharSeries, LfuncError> {
    if !is_odd_prime(p) {
        return Err(LfuncError::NotOddPrime(p));
    }
    if n == 0 {
        return Err(LfuncError::Parameters("level must be at least 1".into()));
    }
    if prec == 0 || prec > n + 1 {
        return Err(LfuncError::PrecisionExhausted(format!(
            "precision {prec} exceeds what level {n} certifies ({})",
            n + 1
        )));
    }
    if k % 2 == 1 || k < 2 || k + 3 > p || bernoulli_mod(p, 1, k)? != 0 {
        return Err(LfuncError::NotIrregular { p, k });
    }
    let coeffs = raw_series(p, k, n, degree_cap)?;
    let ring = ResidueRing::new(p, prec)?;
    let g = TruncatedSeries::univariate(ring, &coeffs);
    let (mu, lambda) = weierstrass_data(&g)?;
    let c_mod_p = if (mu, lambda) == (0, 1) {
        c_from_series(&g)
    } else {
        None
    };
    Ok(CharSeries {
        p,
        k,
        level: n,
        precision: prec,
        degree_cap,
        g,
        mu,
        lambda,
        c_mod_p,
    })
}

/// Coefficients of `g mod (p^{n+1}, T^D)` without any irregularity check.
pub(crate) fn raw_series(p: u64, k: u64, n: u32, degree_cap: u32) -> Result<Vec<u64>, LfuncError> {
    let ring = ResidueRing::new(p, n + 1)?;
    let pn = ring.modulus() / p;
    if (degree_cap as u64) > pn || degree_cap <= n {
        return Err(LfuncError::Parameters(format!(
            "degree cap {degree_cap} must lie in ({n}, {pn}]"
        )));
    }
    let c = primitive_root(p);
    let buckets = stickelberger_buckets(ring, k, c, fast_path_fits(ring, c));
    let h = expand_in_one_plus_t(ring, &buckets, degree_cap as usize);
    let d = regularization_factor(ring, k, c, degree_cap as usize);
    Ok(divide_series(ring, &h, &d))
}

fn fast_path_fits(ring: ResidueRing, c: u64) -> bool {
    let m = ring.modulus() as u128;
    m < (1 << 32) && (ring.p() as u128) * (c as u128) * m < (1 << 63)
}

/// Teichmuller lift of `a` modulo `p^{n+1}`.
fn teichmuller(ring: ResidueRing, a: u64) -> u64 {
    ring.pow(a, ring.modulus() / ring.p())
}

/// `s` with `x = (1+p)^s (mod p^{n+1})` for `x = 1 (mod p)`, by digit extraction.
fn log_one_plus_p(ring: ResidueRing, mut x: u64) -> u64 {
    let p = ring.p();
    let mut s = 0u64;
    let mut pi = 1u64; // p^{i-1}
    for _ in 0..ring.precision() - 1 {
        let digit = ((x - 1) / (pi * p)) % p;
        if digit > 0 {
            let step = ring.pow(1 + p, digit * pi);
            x = ring.mul(x, ring.inv(step).expect("1 mod p is a unit"));
            s += digit * pi;
        }
        pi *= p;
    }
    debug_assert_eq!(x, 1);
    s
}

/// `W_e = sum omega^{k-1}(a) floor(c a' / M)` over units `a` with `e(a) = e`,
/// where `a' = a / c mod M`. This is minus the regularized Bernoulli
/// distribution `(a - c a')/M + (c - 1)/2`: the constant drops out because the
/// twisted character sums to zero, and the sign is the one `g` needs.
fn stickelberger_buckets(ring: ResidueRing, k: u64, c: u64, fast: bool) -> Vec<u64> {
    let p = ring.p();
    let m = ring.modulus();
    let pn = m / p;
    let c_inv = ring.inv(c).expect("primitive root is a unit");
    let mut acc = vec![0u64; pn as usize];
    for r in 1..p {
        let w = teichmuller(ring, r);
        let twist = ring.pow(w, k - 1);
        // a = w (1+p)^s runs over the units congruent to r; a' = a / c.
        let mut a_prime = ring.mul(w, c_inv);
        if fast {
            for s in 0..pn {
                let t = c * a_prime / m;
                let e = ((pn - s) % pn) as usize;
                acc[e] += t * twist;
                a_prime = (a_prime + p * a_prime) % m;
            }
        } else {
            for s in 0..pn {
                let t = ((c as u128 * a_prime as u128) / m as u128) as u64;
                let e = ((pn - s) % pn) as usize;
                acc[e] = ring.add(acc[e], ring.mul(t, twist));
                a_prime = ring.mul(a_prime, 1 + p);
            }
        }
    }
    acc.into_iter().map(|x| ring.reduce_u64(x)).collect()
}

/// `sum_e W_e (1+T)^e mod T^D`, by Horner in `1 + T`.
fn expand_in_one_plus_t(ring: ResidueRing, w: &[u64], d: usize) -> Vec<u64> {
    let mut h = vec![0u64; d];
    for &we in w.iter().rev() {
        // h <- h (1 + T) + W_e
        for j in (1..d).rev() {
            h[j] = ring.add(h[j], h[j - 1]);
        }
        h[0] = ring.add(h[0], we);
    }
    h
}

/// `1 - omega^k(c) <c> (1+T)^{-log <c>}` mod `T^D`, the exponent taken mod `p^n`.
fn regularization_factor(ring: ResidueRing, k: u64, c: u64, d: usize) -> Vec<u64> {
    let pn = ring.modulus() / ring.p();
    let w = teichmuller(ring, c);
    let bracket = ring.mul(c, ring.inv(w).expect("unit"));
    let e = (pn - log_one_plus_p(ring, bracket) % pn) % pn;
    let lead = ring.mul(ring.pow(w, k), bracket);
    let mut out = vec![0u64; d];
    // C(e, j) exactly, then reduced.
    let mut binom = BigUint::one();
    for (j, slot) in out.iter_mut().enumerate() {
        if j > 0 {
            binom = if j as u64 > e {
                BigUint::zero()
            } else {
                binom * (e - j as u64 + 1) / j as u64
            };
        }
        *slot = ring.neg(ring.mul(lead, ring.reduce_bigint(&BigInt::from(binom.clone()))));
    }
    out[0] = ring.add(out[0], 1);
    out
}

/// `h / d mod T^D` for `d` with unit constant term.
fn divide_series(ring: ResidueRing, h: &[u64], d: &[u64]) -> Vec<u64> {
    let inv0 = ring.inv(d[0]).expect("regularization factor is a unit");
    let mut g = vec![0u64; h.len()];
    for j in 0..h.len() {
        let mut s = h[j];
        for i in 0..j {
            s = ring.sub(s, ring.mul(g[i], d[j - i]));
        }
        g[j] = ring.mul(s, inv0);
    }
    g
}

/// `(mu, lambda)`: the least coefficient valuation and the first index
/// attaining it, over the stored coefficients. Fails when every stored
/// coefficient vanishes at the working precision.
pub fn weierstrass_data(g: &TruncatedSeries) -> Result<(u32, u32), LfuncError> {
    if g.vars() != 1 {
        return Err(LfuncError::Parameters(
            "Weierstrass data needs one variable".into(),
        ));
    }
    let ring = g.ring();
    let vals: Vec<u32> = g.coeffs().iter().map(|&a| ring.valuation(a)).collect();
    let mu = vals.iter().copied().min().unwrap_or(ring.precision());
    if mu >= ring.precision() {
        return Err(LfuncError::PrecisionExhausted(format!(
            "all {} stored coefficients vanish modulo {}",
            vals.len(),
            ring
        )));
    }
    let lambda = vals
        .iter()
        .position(|&v| v == mu)
        .expect("minimum attained") as u32;
    Ok((mu, lambda))
}

/// `c = -a_0 / (p a_1) mod p` for `g = (T - cp) u`; needs precision 2 and a unit `a_1`.
pub fn c_from_series(g: &TruncatedSeries) -> Option<u64> {
    let ring = g.ring();
    let p = ring.p();
    if ring.precision() < 2 || g.coeffs().len() < 2 {
        return None;
    }
    let a0 = g.coeffs()[0];
    let a1 = g.coeffs()[1] % p;
    if !a0.is_multiple_of(p) || a1 == 0 {
        return None;
    }
    let f = ResidueRing::new(p, 1).ok()?;
    let q = (a0 / p) % p;
    Some(f.neg(f.mul(q, f.inv(a1).ok()?)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition2 {
    True,
    False,
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexData {
    pub k: u64,
    pub mu: Option<u32>,
    pub lambda: Option<u32>,
    pub c_mod_p: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition2Report {
    pub p: u64,
    pub per_index: Vec<IndexData>,
    pub value: Condition2,
}

/// Condition (2) at every irregular index: shape `(mu, lambda) = (0, 1)` and `c != 1 (mod p)`.
pub fn condition2(
    p: u64,
    n: u32,
    prec: u32,
    degree_cap: u32,
) -> Result<Condition2Report, LfuncError> {
    let rec = irregular_indices(p)?;
    if rec.is_regular() {
        return Err(LfuncError::Regular(p));
    }
    condition2_at(p, &rec.indices, n, prec, degree_cap)
}

/// As [`condition2`] for known irregular indices.
pub fn condition2_at(
    p: u64,
    indices: &[u64],
    n: u32,
    prec: u32,
    degree_cap: u32,
) -> Result<Condition2Report, LfuncError> {
    let mut per_index = Vec::new();
    let mut value = Condition2::True;
    for &k in indices {
        match char_series(p, k, n, prec, degree_cap) {
            Ok(cs) => {
                let v = match cs.c_mod_p {
                    _ if (cs.mu, cs.lambda) != (0, 1) => Condition2::False,
                    Some(c) if c != 1 => Condition2::True,
                    Some(_) => Condition2::False,
                    None => Condition2::Indeterminate,
                };
                value = combine(value, v);
                per_index.push(IndexData {
                    k,
                    mu: Some(cs.mu),
                    lambda: Some(cs.lambda),
                    c_mod_p: cs.c_mod_p,
                });
            }
            Err(LfuncError::PrecisionExhausted(_)) => {
                value = combine(value, Condition2::Indeterminate);
                per_index.push(IndexData {
                    k,
                    mu: None,
                    lambda: None,
                    c_mod_p: None,
                });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Condition2Report {
        p,
        per_index,
        value,
    })
}

fn combine(a: Condition2, b: Condition2) -> Condition2 {
    use Condition2::*;
    match (a, b) {
        (False, _) | (_, False) => False,
        (Indeterminate, _) | (_, Indeterminate) => Indeterminate,
        _ => True,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modarith::primes::primes_up_to;
    use crate::modarith::{bigrational_bernoulli, MonomialBasis};
    use num_rational::BigRational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// `-(1 - p^{m-1}) B_m / m mod p^N` from the exact rational.
    fn interpolation_rhs(p: u64, m: u64, ring: ResidueRing) -> u64 {
        let pm = BigRational::from_integer(BigInt::from(p).pow(m as u32 - 1));
        let one = BigRational::from_integer(BigInt::from(1));
        let value = -(one - pm) * bigrational_bernoulli(m as usize)
            / BigRational::from_integer(BigInt::from(m));
        ring.reduce_rational(&value).unwrap()
    }

    fn interpolation_point(ring: ResidueRing, m: u64) -> u64 {
        let one_plus_p = 1 + ring.p();
        let inv = ring.inv(ring.pow(one_plus_p, m - 1)).unwrap();
        ring.sub(inv, 1)
    }

    #[test]
    fn interpolation_at_k_and_k_plus_p_minus_1() {
        for (p, k) in [(37u64, 32u64), (59, 44), (67, 58), (101, 68)] {
            for n in 1..=2u32 {
                if n == 2 && p > 70 {
                    continue;
                }
                let cs = char_series(p, k, n, n + 1, 6).unwrap();
                let ring = cs.g.ring();
                for m in [k, k + p - 1] {
                    let lhs = cs.g.eval(&[interpolation_point(ring, m)]).unwrap();
                    assert_eq!(
                        lhs,
                        interpolation_rhs(p, m, ring),
                        "p={p} k={k} n={n} m={m}"
                    );
                }
            }
        }
    }

    #[test]
    fn slow_path_agrees_with_fast_path() {
        let ring = ResidueRing::new(37, 2).unwrap();
        let c = primitive_root(37);
        assert!(fast_path_fits(ring, c));
        assert_eq!(
            stickelberger_buckets(ring, 32, c, true),
            stickelberger_buckets(ring, 32, c, false)
        );
    }

    #[test]
    fn log_matches_powering() {
        let ring = ResidueRing::new(7, 4).unwrap();
        for s in [0u64, 1, 5, 48, 200, 342] {
            assert_eq!(log_one_plus_p(ring, ring.pow(8, s)), s);
        }
    }

    #[test]
    fn levels_agree_mod_p() {
        let g1 = char_series(37, 32, 1, 1, 8).unwrap();
        let g2 = char_series(37, 32, 2, 1, 8).unwrap();
        assert_eq!(g1.coefficients(), g2.coefficients());
        let g1 = char_series(37, 32, 1, 2, 8).unwrap();
        let g2 = char_series(37, 32, 2, 2, 8).unwrap();
        assert_eq!(g1.coefficients()[0], g2.coefficients()[0]);
        assert_eq!(g1.coefficients()[1] % 37, g2.coefficients()[1] % 37);
    }

    #[test]
    fn constant_term_divisible_by_p() {
        let cs = char_series(37, 32, 1, 2, 4).unwrap();
        assert_eq!(cs.coefficients()[0] % 37, 0);
        assert_eq!((cs.mu, cs.lambda), (0, 1));
    }

    #[test]
    fn parameter_errors() {
        assert!(matches!(
            char_series(37, 32, 1, 3, 4),
            Err(LfuncError::PrecisionExhausted(_))
        ));
        assert!(matches!(
            char_series(37, 30, 1, 2, 4),
            Err(LfuncError::NotIrregular { .. })
        ));
        assert!(matches!(
            char_series(37, 32, 1, 2, 40),
            Err(LfuncError::Parameters(_))
        ));
        assert!(matches!(
            condition2(7, 1, 2, 4),
            Err(LfuncError::Regular(7))
        ));
    }

    #[test]
    fn weierstrass_examples() {
        let ring = ResidueRing::new(5, 3).unwrap();
        let b = MonomialBasis::new(1, 4);
        // T - 5 * 3 * (unit 2 + T)
        let t = TruncatedSeries::variable(ring, &b, 0);
        let u = TruncatedSeries::from_terms(ring, &b, &[(2, vec![0]), (1, vec![1])]);
        let g = t
            .sub(&TruncatedSeries::constant(ring, &b, 15))
            .unwrap()
            .mul(&u)
            .unwrap();
        assert_eq!(weierstrass_data(&g).unwrap(), (0, 1));
        assert_eq!(c_from_series(&g), Some(3));
        let g = TruncatedSeries::from_terms(ring, &b, &[(5, vec![0]), (5, vec![1])]);
        assert_eq!(weierstrass_data(&g).unwrap(), (1, 0));
        let zero = TruncatedSeries::zero(ring, &b);
        assert!(matches!(
            weierstrass_data(&zero),
            Err(LfuncError::PrecisionExhausted(_))
        ));
    }

    #[test]
    fn c_is_invariant_under_unit_multiplication() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (p, k) in [(37u64, 32u64), (59, 44), (103, 24)] {
            let cs = char_series(p, k, 1, 2, 6).unwrap();
            for _ in 0..10 {
                let ring = cs.g.ring();
                let coeffs: Vec<u64> = (0..6)
                    .map(|j| {
                        if j == 0 {
                            rng.gen_range(1..p)
                        } else {
                            rng.gen_range(0..ring.modulus())
                        }
                    })
                    .collect();
                let u = TruncatedSeries::from_coeffs(ring, cs.g.basis(), coeffs);
                let gu = cs.g.mul(&u).unwrap();
                assert_eq!(c_from_series(&gu), cs.c_mod_p);
            }
        }
    }

    #[test]
    fn condition2_below_400() {
        let expected = [
            (37u64, 13u64),
            (59, 31),
            (67, 59),
            (101, 91),
            (103, 82),
            (131, 72),
            (149, 94),
            (233, 90),
            (257, 229),
            (263, 99),
            (271, 193),
            (283, 246),
            (293, 75),
            (307, 290),
            (311, 224),
            (347, 181),
            (389, 155),
        ];
        let mut seen = Vec::new();
        for p in primes_up_to(400).into_iter().filter(|&p| p > 3) {
            let rec = irregular_indices(p).unwrap();
            if rec.index_of_irregularity != 1 {
                continue;
            }
            let report = condition2(p, 1, 2, 4).unwrap();
            assert_eq!(report.value, Condition2::True, "p = {p}");
            let d = &report.per_index[0];
            assert_eq!((d.mu, d.lambda), (Some(0), Some(1)));
            seen.push((p, d.c_mod_p.unwrap()));
        }
        assert_eq!(seen, expected);
    }

    #[test]
    fn precision_one_leaves_c_undetermined() {
        let report = condition2(37, 1, 1, 4).unwrap();
        assert_eq!(report.value, Condition2::Indeterminate);
    }
}
