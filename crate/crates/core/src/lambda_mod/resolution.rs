//! Koszul cohomology through a free resolution `0 -> Λ^s -R-> Λ^g -> X -> 0`.
//!
//! For a sequence `x` regular on `Λ` of length `L`, `H^i(x, Λ) = 0` for
//! `i < L` and `H^L(x, Λ) = Λ/(x)`, so the long exact sequence leaves
//! `H^{L-1}(x, X) = ker R̄` and `H^L(x, X) = coker R̄` with `R̄` the map
//! induced on `Λ/(x)`. For the `ω` and `ν` families `Λ/(x)` is a truncated
//! group ring, free over `Z/p^n` (full sequence) or `Z_p` (primed).

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::group::CohomologyGroup;
use super::presentation::ModulePresentation;
use super::sequence::{Flavor, Sequence};
use super::LambdaError;
use crate::modarith::linalg::{coker_exponents, left_kernel, local_smith, subquotient_exponents};
use crate::modarith::primes::{inv_mod_prime, mul_mod};
use crate::modarith::smith::rank;
use crate::modarith::{ModMatrix, ResidueRing};

const EVAL_PRIME: u64 = (1 << 61) - 1;
const MAX_QUOTIENT_RANK: usize = 4096;

/// Certifies that the relation map `Λ^s -> Λ^g` is injective: some maximal
/// minor is a nonzero polynomial, witnessed at a random point modulo a prime.
pub fn is_injective(module: &ModulePresentation) -> bool {
    let s = module.relations.len();
    let g = module.generators;
    if s == 0 {
        return true;
    }
    if s > g {
        return false;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x1a3b);
    (0..4).any(|_| {
        let point: Vec<u64> = (0..module.vars())
            .map(|_| rng.gen_range(1..EVAL_PRIME))
            .collect();
        let rows: Vec<Vec<u64>> = module
            .relations
            .iter()
            .map(|rel| rel.iter().map(|f| f.eval_mod(&point, EVAL_PRIME)).collect())
            .collect();
        rank_mod_prime(rows, EVAL_PRIME) == s
    })
}

fn rank_mod_prime(mut a: Vec<Vec<u64>>, q: u64) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..cols {
        let Some(piv) = (r..rows).find(|&i| a[i][col] != 0) else {
            continue;
        };
        a.swap(r, piv);
        let inv = inv_mod_prime(a[r][col], q);
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in rest.iter_mut() {
            let f = mul_mod(row[col], inv, q);
            if f != 0 {
                for (x, &y) in row[col..cols].iter_mut().zip(&pivot_row[col..cols]) {
                    *x = (*x + q - mul_mod(f, y, q)) % q;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Integer matrix of `R̄` on `Q^s -> Q^g`, rows indexed by (relation, basis
/// monomial of `Q`), columns by (generator, basis monomial).
fn quotient_matrix(
    x: &Sequence,
    module: &ModulePresentation,
) -> Result<(Vec<Vec<i128>>, usize), LambdaError> {
    let p = module.p();
    let r = module.vars();
    let period = p.checked_pow(x.level).ok_or_else(|| {
        LambdaError::PrecisionExhausted("level too large for the group ring".into())
    })?;
    let m = match x.flavor {
        Flavor::Nu => period - 1,
        _ => period,
    } as usize;
    let size = m
        .checked_pow(r as u32)
        .filter(|&s| {
            s.saturating_mul(module.generators.max(module.relations.len())) <= MAX_QUOTIENT_RANK
        })
        .ok_or_else(|| LambdaError::PrecisionExhausted("group ring quotient too large".into()))?;
    let period = period as usize;
    let big = period.pow(r as u32);
    let g = module.generators;
    let digits = |mut idx: usize, base: usize| -> Vec<usize> {
        (0..r)
            .map(|_| {
                let d = idx % base;
                idx /= base;
                d
            })
            .collect()
    };
    // reduce an element of Z[S]/(S^period - 1) into the basis of Q
    let reduce = |v: &[i128]| -> Vec<i128> {
        let mut out = vec![0i128; size];
        for (idx, &c) in v.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let ks = digits(idx, period);
            // each coordinate equal to period - 1 expands to -(sum of the others) under ν
            let mut partial: Vec<(usize, i128)> = vec![(0, c)];
            let mut stride = 1usize;
            for &k in &ks {
                let mut next = Vec::new();
                for &(pos, val) in &partial {
                    if k < m {
                        next.push((pos + k * stride, val));
                    } else {
                        for j in 0..m {
                            next.push((pos + j * stride, -val));
                        }
                    }
                }
                partial = next;
                stride *= m;
            }
            for (pos, val) in partial {
                out[pos] += val;
            }
        }
        out
    };
    let mut rows = Vec::with_capacity(module.relations.len() * size);
    for rel in &module.relations {
        let coeffs: Vec<Vec<i128>> = rel
            .iter()
            .map(|f| f.group_ring_coeffs(period as u64))
            .collect();
        for b in 0..size {
            let shift = digits(b, m);
            let mut row = Vec::with_capacity(g * size);
            for c in &coeffs {
                // S^shift * f in Z[S]/(S^period - 1)
                let mut shifted = vec![0i128; big];
                for (idx, &v) in c.iter().enumerate() {
                    if v != 0 {
                        let ks = digits(idx, period);
                        let pos = ks
                            .iter()
                            .zip(&shift)
                            .rev()
                            .fold(0usize, |acc, (&k, &s)| acc * period + (k + s) % period);
                        shifted[pos] += v;
                    }
                }
                row.extend(reduce(&shifted));
            }
            rows.push(row);
        }
    }
    Ok((rows, g * size))
}

/// All `H^i(x, X)` through the resolution; requires an injective presentation.
pub fn cohomology(
    x: &Sequence,
    module: &ModulePresentation,
) -> Result<Vec<CohomologyGroup>, LambdaError> {
    let p = module.p();
    let len = x.len();
    let mut out = vec![CohomologyGroup::zero(p); len + 1];
    if !x.primed && x.level == 0 {
        // the sequence contains the unit 1
        return Ok(out);
    }
    if x.flavor == Flavor::Nu && p.pow(x.level) == 1 {
        return Ok(out);
    }
    let (mat, cols) = quotient_matrix(x, module)?;
    if !x.primed {
        let ring = ResidueRing::new(p, x.level)?;
        let rows: Vec<Vec<u64>> = mat
            .iter()
            .map(|r| r.iter().map(|&v| ring.reduce_i128(v)).collect())
            .collect();
        let rbar = ModMatrix::from_rows(ring, cols, &rows);
        let ker = left_kernel(&rbar);
        out[len - 1] = CohomologyGroup::finite(
            p,
            subquotient_exponents(&ker, &ModMatrix::zeros(ring, 0, ker.cols())),
        );
        out[len] = CohomologyGroup::finite(p, coker_exponents(&rbar));
    } else {
        let big: Vec<Vec<BigInt>> = mat
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        let rk = rank(&big);
        out[len - 1] = CohomologyGroup::zero(p).with_free_rank(mat.len() - rk);
        let torsion = torsion_exponents(p, &mat, cols, rk)?;
        out[len] = CohomologyGroup::finite(p, torsion).with_free_rank(cols - rk);
    }
    Ok(out)
}

/// Torsion of the `Z_p`-cokernel: local Smith valuations modulo `p^M`,
/// raising `M` until all `rank` pivots are seen.
fn torsion_exponents(
    p: u64,
    mat: &[Vec<i128>],
    cols: usize,
    rk: usize,
) -> Result<Vec<u32>, LambdaError> {
    let mut prec = 4u32;
    loop {
        let ring = ResidueRing::new(p, prec).map_err(|_| {
            LambdaError::PrecisionExhausted("torsion exponent exceeds word-size precision".into())
        })?;
        let rows: Vec<Vec<u64>> = mat
            .iter()
            .map(|r| r.iter().map(|&v| ring.reduce_i128(v)).collect())
            .collect();
        let diag = local_smith(&ModMatrix::from_rows(ring, cols, &rows));
        let seen: Vec<u32> = diag.into_iter().filter(|&v| v < prec).collect();
        if seen.len() == rk {
            return Ok(seen.into_iter().filter(|&v| v > 0).collect());
        }
        prec = (prec * 2).min(prec + 16);
        if ResidueRing::new(p, prec).is_err() {
            let mut top = prec;
            while top > 1 && ResidueRing::new(p, top).is_err() {
                top -= 1;
            }
            if top <= prec / 2 {
                return Err(LambdaError::PrecisionExhausted(
                    "torsion exponent exceeds word-size precision".into(),
                ));
            }
            prec = top;
        }
    }
}
