//! Exact Bernoulli numbers in big-rational arithmetic.
//!
//! Uses the defining recursion `sum_{j<=m} C(m+1, j) B_j = 0` with the
//! convention `B_1 = -1/2`. Every denominator up to index `m` divides the
//! product of primes `<= m + 1`, so each new value is computed as one big
//! integer sum over a common denominator instead of a chain of rational adds.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::primes::{is_prime, primes_up_to};

fn cache() -> &'static Mutex<Vec<BigRational>> {
    static CACHE: OnceLock<Mutex<Vec<BigRational>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(Vec::new()))
}

/// `B_0, ..., B_{m_max}`.
pub fn bernoulli_table(m_max: usize) -> Vec<BigRational> {
    let mut table = cache().lock().expect("bernoulli cache poisoned");
    extend_table(&mut table, m_max);
    table[..=m_max].to_vec()
}

/// The exact Bernoulli number `B_m`.
pub fn bigrational_bernoulli(m: usize) -> BigRational {
    let mut table = cache().lock().expect("bernoulli cache poisoned");
    extend_table(&mut table, m);
    table[m].clone()
}

fn extend_table(table: &mut Vec<BigRational>, m_max: usize) {
    if table.is_empty() {
        table.push(BigRational::one());
    }
    while table.len() <= m_max {
        let m = table.len();
        let value = if m > 1 && m % 2 == 1 {
            BigRational::zero()
        } else {
            next_bernoulli(table, m)
        };
        table.push(value);
    }
}

fn next_bernoulli(table: &[BigRational], m: usize) -> BigRational {
    // Common denominator for B_0..B_{m-1}.
    let common: BigInt = primes_up_to(m as u64 + 1)
        .into_iter()
        .map(BigInt::from)
        .product();
    let mut sum = BigInt::zero();
    let mut binom = BigInt::one(); // C(m+1, j)
    for (j, b) in table.iter().enumerate().take(m) {
        if j > 0 {
            binom = binom * BigInt::from(m + 2 - j) / BigInt::from(j);
        }
        if b.is_zero() {
            continue;
        }
        let scale = &common / b.denom();
        sum += &binom * b.numer() * scale;
    }
    -BigRational::new(sum, common * BigInt::from(m + 1))
}

/// Von Staudt-Clausen: for even `m >= 2` the denominator of `B_m` is the
/// product of the primes `q` with `(q - 1) | m`, hence squarefree.
pub fn von_staudt_clausen_holds(m: usize, b: &BigRational) -> bool {
    if m == 0 {
        return b.is_one();
    }
    if m == 1 {
        return *b == BigRational::new(BigInt::from(-1), BigInt::from(2));
    }
    if m % 2 == 1 {
        return b.is_zero();
    }
    let expected: BigInt = (1..=m as u64)
        .filter(|d| (m as u64).is_multiple_of(*d) && is_prime(d + 1))
        .map(|d| BigInt::from(d + 1))
        .product();
    *b.denom() == expected && !b.numer().is_zero() && b.denom().gcd(b.numer()).is_one()
}
