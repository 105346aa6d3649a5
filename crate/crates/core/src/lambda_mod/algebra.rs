//! The truncated Iwasawa algebra `(Z/p^N)[[T_1..T_r]] / (deg >= D)` and
//! modules over it flattened to `Z/p^N`-modules.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::LambdaError;
use crate::modarith::linalg::{row_module_log_size, subquotient_exponents};
use crate::modarith::{howell_basis, ModMatrix, MonomialBasis, ResidueRing, TruncatedSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TruncAlgebra {
    pub p: u64,
    pub precision: u32,
    pub vars: usize,
    pub degree_cap: u32,
}

impl TruncAlgebra {
    pub fn new(p: u64, precision: u32, vars: usize, degree_cap: u32) -> Result<Self, LambdaError> {
        ResidueRing::new(p, precision)?;
        if vars == 0 {
            return Err(LambdaError::Invalid(
                "the algebra needs at least one variable".into(),
            ));
        }
        if degree_cap == 0 {
            return Err(LambdaError::Invalid("degree cap must be positive".into()));
        }
        Ok(Self {
            p,
            precision,
            vars,
            degree_cap,
        })
    }

    pub fn ring(&self) -> ResidueRing {
        ResidueRing::new(self.p, self.precision).expect("validated at construction")
    }

    pub fn basis(&self) -> Arc<MonomialBasis> {
        MonomialBasis::new(self.vars, self.degree_cap)
    }

    /// `Z/p^N`-rank of the algebra.
    pub fn dim(&self) -> usize {
        binomial(self.degree_cap as usize - 1 + self.vars, self.vars)
    }

    /// The algebra one step finer in both precision and degree.
    pub fn refined(&self) -> Result<Self, LambdaError> {
        Self::new(self.p, self.precision + 1, self.vars, self.degree_cap + 1)
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Matrix of `x -> x f` on the algebra, in the monomial basis.
pub fn mult_matrix(f: &TruncatedSeries) -> ModMatrix {
    let basis = f.basis();
    let ring = f.ring();
    let n = basis.len();
    let mut m = ModMatrix::zeros(ring, n, n);
    let nonzero: Vec<(usize, u64)> = f
        .coeffs()
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, c)| c != 0)
        .collect();
    for i in 0..n {
        for &(j, c) in &nonzero {
            if let Some(k) = basis.product_index(i, j) {
                let v = ring.add(m.get(i, k), c);
                m.set(i, k, v);
            }
        }
    }
    m
}

/// `X = A / S` with `A = (Z/p^N)^{g dim}` the flattened free module on `g`
/// generators and `S` the `Z/p^N`-span of all monomial multiples of the relations.
#[derive(Clone)]
pub struct FlatModule {
    pub algebra: TruncAlgebra,
    pub basis: Arc<MonomialBasis>,
    pub generators: usize,
    /// Howell basis of `S`.
    pub relations: ModMatrix,
}

impl FlatModule {
    /// Flattens the submodule generated by `relations` (each a vector of `g` series).
    pub fn new(
        algebra: TruncAlgebra,
        generators: usize,
        relations: &[Vec<TruncatedSeries>],
    ) -> Self {
        let basis = algebra.basis();
        let ring = algebra.ring();
        let dim = basis.len();
        let width = generators * dim;
        let mut rows = ModMatrix::zeros(ring, 0, width);
        for rel in relations {
            assert_eq!(rel.len(), generators, "relation length");
            // row for T^alpha * rel, one per basis monomial alpha
            let blocks: Vec<ModMatrix> = rel.iter().map(mult_matrix).collect();
            for alpha in 0..dim {
                let mut row = vec![0u64; width];
                for (j, b) in blocks.iter().enumerate() {
                    row[j * dim..(j + 1) * dim].copy_from_slice(b.row(alpha));
                }
                if row.iter().any(|&x| x != 0) {
                    rows.push_row(&row);
                }
            }
        }
        Self {
            algebra,
            basis,
            generators,
            relations: howell_basis(&rows),
        }
    }

    pub fn ring(&self) -> ResidueRing {
        self.algebra.ring()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.generators * self.dim()
    }

    /// Adds the rows of `extra` (vectors in the ambient module) to `S`.
    pub fn with_extra_rows(&self, extra: &ModMatrix) -> Self {
        let mut out = self.clone();
        out.relations = howell_basis(&self.relations.vstack(extra));
        out
    }

    /// Adds the submodule generated by further relations.
    pub fn with_relations(&self, relations: &[Vec<TruncatedSeries>]) -> Self {
        let extra = FlatModule::new(self.algebra, self.generators, relations);
        self.with_extra_rows(&extra.relations)
    }

    /// `log_p |X|`.
    pub fn log_size(&self) -> u64 {
        self.ambient() as u64 * self.algebra.precision as u64 - row_module_log_size(&self.relations)
    }

    /// Invariant factor exponents of `X` as an abelian group.
    pub fn invariants(&self) -> Vec<u32> {
        let ring = self.ring();
        subquotient_exponents(&ModMatrix::identity(ring, self.ambient()), &self.relations)
    }

    /// Block-diagonal matrix of multiplication by `f` on the ambient module.
    pub fn scalar(&self, f: &TruncatedSeries) -> ModMatrix {
        block_diagonal(&mult_matrix(f), self.generators)
    }

    /// `S` repeated on `copies` blocks of the ambient module.
    pub fn relations_power(&self, copies: usize) -> ModMatrix {
        block_diagonal(&self.relations, copies)
    }

    /// Rows spanning `m^k A` for `m = (p, T_1, .., T_r)`.
    pub fn maximal_ideal_power(&self, k: u32) -> ModMatrix {
        let ring = self.ring();
        let dim = self.dim();
        let mut out = ModMatrix::zeros(ring, 0, self.ambient());
        for j in 0..self.generators {
            for a in 0..dim {
                let deg: u32 = self.basis.exponents(a).iter().sum();
                let c = if deg >= k { 1 } else { ring.p_power(k - deg) };
                if c != 0 {
                    let mut row = vec![0u64; self.ambient()];
                    row[j * dim + a] = c;
                    out.push_row(&row);
                }
            }
        }
        out
    }
}

/// `diag(m, m, ..., m)` with `copies` blocks.
pub fn block_diagonal(m: &ModMatrix, copies: usize) -> ModMatrix {
    let ring = m.ring();
    let mut out = ModMatrix::zeros(ring, m.rows() * copies, m.cols() * copies);
    for c in 0..copies {
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let v = m.get(i, j);
                if v != 0 {
                    out.set(c * m.rows() + i, c * m.cols() + j, v);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(alg: &TruncAlgebra, terms: &[(i64, Vec<u32>)]) -> TruncatedSeries {
        TruncatedSeries::from_terms(alg.ring(), &alg.basis(), terms)
    }

    #[test]
    fn dimensions() {
        let a = TruncAlgebra::new(3, 3, 2, 12).unwrap();
        assert_eq!(a.dim(), 78);
        assert_eq!(a.basis().len(), 78);
        assert_eq!(TruncAlgebra::new(3, 3, 1, 12).unwrap().dim(), 12);
    }

    #[test]
    fn mult_matrix_multiplies() {
        let alg = TruncAlgebra::new(5, 2, 2, 4).unwrap();
        let f = series(&alg, &[(3, vec![0, 0]), (1, vec![1, 0]), (7, vec![0, 2])]);
        let g = series(&alg, &[(2, vec![0, 1]), (4, vec![1, 1])]);
        let via_matrix = mult_matrix(&f).apply(g.coeffs());
        assert_eq!(via_matrix, g.mul(&f).unwrap().coeffs());
    }

    #[test]
    fn quotient_sizes() {
        // Lambda/(p, T1) with r = 1: F_p
        let alg = TruncAlgebra::new(3, 3, 1, 6).unwrap();
        let x = FlatModule::new(
            alg,
            1,
            &[
                vec![series(&alg, &[(3, vec![0])])],
                vec![series(&alg, &[(1, vec![1])])],
            ],
        );
        assert_eq!(x.log_size(), 1);
        assert_eq!(x.invariants(), vec![1]);
        // Lambda_trunc itself: (Z/27)^6
        let free = FlatModule::new(alg, 1, &[]);
        assert_eq!(free.log_size(), 18);
        // m^2 quotient of the free module: Z/9 + Z/3 (1 and T)
        let q = free.with_extra_rows(&free.maximal_ideal_power(2));
        assert_eq!(q.invariants(), vec![1, 2]);
    }
}
