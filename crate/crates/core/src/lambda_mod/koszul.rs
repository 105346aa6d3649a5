//! Koszul complexes `K_•(x)` and the cohomology of `Hom_Λ(K_•(x), X)`.

use serde::{Deserialize, Serialize};

use super::algebra::{block_diagonal, mult_matrix, FlatModule, TruncAlgebra};
use super::group::CohomologyGroup;
use super::presentation::ModulePresentation;
use super::resolution;
use super::sequence::{Flavor, Sequence};
use super::LambdaError;
use crate::modarith::linalg::{preimage, subquotient_exponents};
use crate::modarith::{ModMatrix, TruncatedSeries};

/// `K_L -> ... -> K_0` with `K_i` the `i`-th exterior power of `Λ^L`.
#[derive(Clone, Debug)]
pub struct KoszulComplex {
    pub length: usize,
    /// Lexicographic wedge bases; `bases[i]` lists the increasing `i`-tuples.
    pub bases: Vec<Vec<Vec<usize>>>,
    /// `differentials[i]` for `1 <= i <= L` has rows `K_i` and columns
    /// `K_{i-1}`; `differentials[0]` is empty.
    pub differentials: Vec<Vec<Vec<TruncatedSeries>>>,
}

/// Increasing `k`-subsets of `0..n` in lexicographic order.
pub fn wedge_basis(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for j in start..n {
            cur.push(j);
            go(j + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// The Koszul complex on explicit elements of a truncated algebra.
pub fn koszul_complex_of(x: &[TruncatedSeries]) -> KoszulComplex {
    assert!(!x.is_empty(), "empty sequence");
    let len = x.len();
    let ring = x[0].ring();
    let basis = x[0].basis().clone();
    let bases: Vec<Vec<Vec<usize>>> = (0..=len).map(|i| wedge_basis(len, i)).collect();
    let mut differentials = vec![Vec::new()];
    for i in 1..=len {
        let cols = &bases[i - 1];
        let mut d = vec![vec![TruncatedSeries::zero(ring, &basis); cols.len()]; bases[i].len()];
        for (row, tuple) in bases[i].iter().enumerate() {
            for s in 0..tuple.len() {
                let mut face = tuple.clone();
                let j = face.remove(s);
                let col = cols.binary_search(&face).expect("face is in the basis");
                d[row][col] = if s % 2 == 0 { x[j].clone() } else { x[j].neg() };
            }
        }
        differentials.push(d);
    }
    KoszulComplex {
        length: len,
        bases,
        differentials,
    }
}

/// The Koszul complex of a sequence, read in the given algebra.
pub fn koszul_complex(x: &Sequence, alg: &TruncAlgebra) -> Result<KoszulComplex, LambdaError> {
    if x.vars != alg.vars {
        return Err(LambdaError::Invalid(
            "sequence and algebra disagree on the number of variables".into(),
        ));
    }
    if x.len() != alg.vars + 1 && x.len() != alg.vars {
        return Err(LambdaError::SequenceLength {
            got: x.len(),
            expected: format!("{} or {}", alg.vars, alg.vars + 1),
        });
    }
    Ok(koszul_complex_of(&x.series(alg)))
}

impl KoszulComplex {
    pub fn rank(&self, i: usize) -> usize {
        self.bases[i].len()
    }

    /// `d_{i-1} ∘ d_i` as a matrix over the truncated algebra.
    pub fn compose(&self, i: usize) -> Vec<Vec<TruncatedSeries>> {
        let a = &self.differentials[i];
        let b = &self.differentials[i - 1];
        a.iter()
            .map(|row| {
                (0..b[0].len())
                    .map(|c| {
                        row.iter().zip(b).fold(
                            TruncatedSeries::zero(row[0].ring(), row[0].basis()),
                            |acc, (x, brow)| {
                                acc.add(&x.mul(&brow[c]).expect("same algebra"))
                                    .expect("same algebra")
                            },
                        )
                    })
                    .collect()
            })
            .collect()
    }

    /// True when `d ∘ d = 0` in every degree.
    pub fn is_complex(&self) -> bool {
        (2..=self.length).all(|i| {
            self.compose(i)
                .iter()
                .flatten()
                .all(TruncatedSeries::is_zero)
        })
    }

    /// The cochain map `Hom(K_i, X) -> Hom(K_{i+1}, X)` on the flattened
    /// ambient `A^{K_i} -> A^{K_{i+1}}`, block `[I][J] = d_{i+1}[J][I]`.
    fn cochain_map(&self, x: &FlatModule, i: usize) -> ModMatrix {
        let d = &self.differentials[i + 1];
        let a = x.ambient();
        let ring = x.ring();
        let mut out = ModMatrix::zeros(ring, self.rank(i) * a, self.rank(i + 1) * a);
        for (jj, row) in d.iter().enumerate() {
            for (ii, f) in row.iter().enumerate() {
                if f.is_zero() {
                    continue;
                }
                let m = block_diagonal(&mult_matrix(f), x.generators);
                for r in 0..a {
                    for c in 0..a {
                        let v = m.get(r, c);
                        if v != 0 {
                            out.set(ii * a + r, jj * a + c, v);
                        }
                    }
                }
            }
        }
        out
    }

    /// `H^i(Hom(K_•, X))` for every `i`, for a faithfully flattened `X`.
    pub fn cohomology(&self, x: &FlatModule) -> Vec<CohomologyGroup> {
        let p = x.algebra.p;
        let ring = x.ring();
        let maps: Vec<ModMatrix> = (0..self.length).map(|i| self.cochain_map(x, i)).collect();
        (0..=self.length)
            .map(|i| {
                let rel_i = x.relations_power(self.rank(i));
                let cycles = if i == self.length {
                    ModMatrix::identity(ring, self.rank(i) * x.ambient())
                } else {
                    preimage(&maps[i], &x.relations_power(self.rank(i + 1)))
                };
                let bounds = if i == 0 {
                    rel_i
                } else {
                    rel_i.vstack(&maps[i - 1])
                };
                CohomologyGroup::finite(p, subquotient_exponents(&cycles, &bounds))
            })
            .collect()
    }
}

/// All `H^i(x, X)`, `0 <= i <= |x|`.
///
/// A module certified finite is handled exactly by flattening. Otherwise,
/// for the `ω`/`ν` families and a presentation `0 -> Λ^s -> Λ^g -> X -> 0`,
/// the long exact sequence of the resolution is used. Anything else is
/// reported as precision exhaustion.
pub fn koszul_cohomology_all(
    x: &Sequence,
    module: &ModulePresentation,
) -> Result<Vec<CohomologyGroup>, LambdaError> {
    let alg = module.algebra;
    let complex = koszul_complex(x, &alg)?;
    if let Some(flat) = module.certify_finite() {
        return Ok(complex.cohomology(&flat));
    }
    if x.flavor != Flavor::Custom && resolution::is_injective(module) {
        return resolution::cohomology(x, module);
    }
    Err(LambdaError::PrecisionExhausted(format!(
        "module not certified finite at (N, D) = ({}, {}) and no resolution route applies",
        alg.precision, alg.degree_cap
    )))
}

/// `H^i(x, X)`; zero for `i > |x|`.
pub fn koszul_cohomology(
    x: &Sequence,
    module: &ModulePresentation,
    i: usize,
) -> Result<CohomologyGroup, LambdaError> {
    let all = koszul_cohomology_all(x, module)?;
    Ok(all
        .get(i)
        .cloned()
        .unwrap_or_else(|| CohomologyGroup::zero(module.p())))
}

/// Cardinalities in `0 -> H^{i-1}(x', X)/p^n -> H^i(x, X) -> H^i(x', X)[p^n] -> 0`
/// as `log_p` values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactSequenceCheck {
    pub i: usize,
    pub n: u32,
    pub left: u64,
    pub middle: u64,
    pub right: u64,
    pub ok: bool,
}

/// Checks the exact sequence for `x = (p^n) ⌢ x'` at position `i`.
pub fn exact_sequence_check(
    x: &Sequence,
    module: &ModulePresentation,
    i: usize,
) -> Result<ExactSequenceCheck, LambdaError> {
    let (n, primed) = x.split_p_power(module.p())?;
    let full = koszul_cohomology_all(x, module)?;
    let part = koszul_cohomology_all(&primed, module)?;
    let zero = CohomologyGroup::zero(module.p());
    let left = if i == 0 {
        0
    } else {
        part.get(i - 1).unwrap_or(&zero).log_quotient(n)
    };
    let middle = full
        .get(i)
        .unwrap_or(&zero)
        .log_order()
        .ok_or_else(|| LambdaError::NotFinite(format!("H^{i}(x, X) is infinite")))?;
    let right = part.get(i).unwrap_or(&zero).log_torsion(n);
    Ok(ExactSequenceCheck {
        i,
        n,
        left,
        middle,
        right,
        ok: left + right == middle,
    })
}
