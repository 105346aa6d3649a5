use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::primes::is_prime;
use super::ArithError;

/// Largest modulus we accept; keeps sums of two residues well inside `u64`.
const MAX_MODULUS: u64 = 1 << 62;

/// The residue ring `Z/p^N` for an odd prime `p`.
///
/// Elements are plain `u64` values held in canonical form `[0, p^N)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResidueRing {
    p: u64,
    prec: u32,
    modulus: u64,
}

impl ResidueRing {
    pub fn new(p: u64, prec: u32) -> Result<Self, ArithError> {
        if p < 3 || !is_prime(p) {
            return Err(ArithError::NotOddPrime(p));
        }
        Self::chain_ring(p, prec)
    }

    /// Like [`ResidueRing::new`] but also accepts `p = 2`. The linear algebra
    /// only needs a chain ring; the number-theoretic modules use `new`.
    pub fn chain_ring(p: u64, prec: u32) -> Result<Self, ArithError> {
        if !is_prime(p) {
            return Err(ArithError::NotOddPrime(p));
        }
        if prec == 0 {
            return Err(ArithError::ZeroPrecision);
        }
        let mut modulus: u64 = 1;
        for _ in 0..prec {
            modulus = modulus
                .checked_mul(p)
                .filter(|&m| m < MAX_MODULUS)
                .ok_or(ArithError::ModulusTooLarge { p, prec })?;
        }
        Ok(Self { p, prec, modulus })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn precision(&self) -> u32 {
        self.prec
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Same prime, different precision.
    pub fn with_precision(&self, prec: u32) -> Result<Self, ArithError> {
        Self::new(self.p, prec)
    }

    #[inline]
    pub fn reduce_u64(&self, x: u64) -> u64 {
        x % self.modulus
    }

    #[inline]
    pub fn reduce_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.modulus as i64) as u64
    }

    #[inline]
    pub fn reduce_i128(&self, x: i128) -> u64 {
        x.rem_euclid(self.modulus as i128) as u64
    }

    pub fn reduce_bigint(&self, x: &BigInt) -> u64 {
        let m = BigInt::from(self.modulus);
        x.mod_floor(&m).to_u64().expect("reduced value fits")
    }

    /// Reduces a rational whose denominator is a `p`-unit.
    pub fn reduce_rational(&self, x: &BigRational) -> Result<u64, ArithError> {
        let num = self.reduce_bigint(x.numer());
        let den = self.reduce_bigint(x.denom());
        if den.is_multiple_of(self.p) {
            return Err(ArithError::NonUnit {
                value: den,
                modulus: self.modulus,
            });
        }
        Ok(self.mul(num, self.inv(den)?))
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.modulus <= u32::MAX as u64 {
            a * b % self.modulus
        } else {
            ((a as u128 * b as u128) % self.modulus as u128) as u64
        }
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.modulus;
        base %= self.modulus;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// `p^e` reduced into the ring (zero once `e >= N`).
    pub fn p_power(&self, e: u32) -> u64 {
        if e >= self.prec {
            0
        } else {
            self.p.pow(e)
        }
    }

    /// `p`-adic valuation of a residue, capped at the precision (so `v(0) = N`).
    pub fn valuation(&self, mut a: u64) -> u32 {
        a %= self.modulus;
        if a == 0 {
            return self.prec;
        }
        let mut v = 0;
        while a.is_multiple_of(self.p) {
            a /= self.p;
            v += 1;
        }
        v
    }

    #[inline]
    pub fn is_unit(&self, a: u64) -> bool {
        !a.is_multiple_of(self.p)
    }

    pub fn inv(&self, a: u64) -> Result<u64, ArithError> {
        if !self.is_unit(a) {
            return Err(ArithError::NonUnit {
                value: a,
                modulus: self.modulus,
            });
        }
        let (g, x, _) = ext_gcd(a as i128, self.modulus as i128);
        debug_assert_eq!(g, 1);
        Ok(self.reduce_i128(x))
    }

    /// Exact division `a / b` where `v(b) <= v(a)`: the quotient is only
    /// determined modulo `p^(N - v(b))`; the least representative is returned.
    pub fn div_exact(&self, a: u64, b: u64) -> Result<u64, ArithError> {
        let vb = self.valuation(b);
        if vb == self.prec || self.valuation(a) < vb {
            return Err(ArithError::NonUnit {
                value: b,
                modulus: self.modulus,
            });
        }
        let pv = self.p.pow(vb);
        let unit = self.inv(b / pv)?;
        Ok(self.mul(a / pv, unit))
    }

    /// Splits a nonzero residue as `p^v * u` with `u` a unit; returns `(v, u)`.
    pub fn split(&self, a: u64) -> Option<(u32, u64)> {
        let v = self.valuation(a);
        if v == self.prec {
            return None;
        }
        Some((v, a / self.p.pow(v)))
    }

    /// Symmetric representative in `(-p^N/2, p^N/2]`.
    pub fn to_signed(&self, a: u64) -> i64 {
        if a > self.modulus / 2 {
            a as i64 - self.modulus as i64
        } else {
            a as i64
        }
    }
}

impl fmt::Display for ResidueRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.prec == 1 {
            write!(f, "Z/{}", self.p)
        } else {
            write!(f, "Z/{}^{}", self.p, self.prec)
        }
    }
}

/// Extended Euclid on signed integers: returns `(g, x, y)` with `ax + by = g`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}
