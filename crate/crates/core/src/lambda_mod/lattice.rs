//! `e(Γ, H)`: the index of `H` in `Γ = Z^r` divided by the exponent of `Γ/H`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::LambdaError;
use crate::modarith::smith::smith_form_big;

/// A full-rank sublattice `H ⊆ Z^r` spanned by the rows of `basis`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lattice {
    pub rank: usize,
    pub basis: Vec<Vec<i64>>,
}

impl Lattice {
    pub fn new(basis: Vec<Vec<i64>>) -> Result<Self, LambdaError> {
        let rank = basis.len();
        if basis.iter().any(|row| row.len() != rank) {
            return Err(LambdaError::Invalid("lattice basis must be square".into()));
        }
        Ok(Self { rank, basis })
    }

    /// `p^n Z^r`.
    pub fn scaled_standard(rank: usize, scale: i64) -> Self {
        let basis = (0..rank)
            .map(|i| (0..rank).map(|j| if i == j { scale } else { 0 }).collect())
            .collect();
        Self { rank, basis }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeE {
    pub index: BigInt,
    pub exponent: BigInt,
    pub e: BigInt,
}

impl LatticeE {
    /// The `p`-parts of all three quantities.
    pub fn p_parts(&self, p: u64) -> LatticeE {
        LatticeE {
            index: p_part(&self.index, p),
            exponent: p_part(&self.exponent, p),
            e: p_part(&self.e, p),
        }
    }
}

fn p_part(x: &BigInt, p: u64) -> BigInt {
    let p = BigInt::from(p);
    let mut x = x.abs();
    let mut out = BigInt::one();
    while !x.is_zero() && x.is_multiple_of(&p) {
        x /= &p;
        out *= &p;
    }
    out
}

/// Index, exponent and `e` of `Z^r / H` from the Smith form `d_1 | .. | d_r`.
pub fn lattice_e(h: &Lattice) -> Result<LatticeE, LambdaError> {
    if h.rank == 0 {
        return Ok(LatticeE {
            index: BigInt::one(),
            exponent: BigInt::one(),
            e: BigInt::one(),
        });
    }
    let big: Vec<Vec<BigInt>> = h
        .basis
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let diag: Vec<BigInt> = smith_form_big(&big).diag.iter().map(|d| d.abs()).collect();
    if diag.iter().any(Zero::is_zero) {
        return Err(LambdaError::Singular);
    }
    let e: BigInt = diag[..h.rank - 1].iter().product();
    Ok(LatticeE {
        index: &e * &diag[h.rank - 1],
        exponent: diag[h.rank - 1].clone(),
        e,
    })
}
