use super::algebra::{FlatModule, TruncAlgebra};
use super::poly::Poly;
use super::LambdaError;

/// `X = Λ^g / (relations)`, each relation a vector of `g` integer polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulePresentation {
    pub algebra: TruncAlgebra,
    pub generators: usize,
    pub relations: Vec<Vec<Poly>>,
}

impl ModulePresentation {
    pub fn new(
        algebra: TruncAlgebra,
        generators: usize,
        relations: Vec<Vec<Poly>>,
    ) -> Result<Self, LambdaError> {
        if generators == 0 {
            return Err(LambdaError::Invalid(
                "a presentation needs at least one generator".into(),
            ));
        }
        for rel in &relations {
            if rel.len() != generators {
                return Err(LambdaError::Invalid(format!(
                    "relation has {} entries for {} generators",
                    rel.len(),
                    generators
                )));
            }
            if rel.iter().any(|f| f.vars() != algebra.vars) {
                return Err(LambdaError::Invalid(
                    "relation entry has the wrong number of variables".into(),
                ));
            }
        }
        Ok(Self {
            algebra,
            generators,
            relations,
        })
    }

    /// `Λ / (f_1, ..., f_t)`.
    pub fn cyclic(algebra: TruncAlgebra, ideal: &[Poly]) -> Result<Self, LambdaError> {
        Self::new(algebra, 1, ideal.iter().map(|f| vec![f.clone()]).collect())
    }

    /// The zero module, presented as `Λ / (1)`.
    pub fn zero(algebra: TruncAlgebra) -> Self {
        Self::cyclic(algebra, &[Poly::constant(algebra.vars, 1)]).expect("valid")
    }

    pub fn p(&self) -> u64 {
        self.algebra.p
    }

    pub fn vars(&self) -> usize {
        self.algebra.vars
    }

    pub fn with_algebra(&self, algebra: TruncAlgebra) -> Self {
        Self {
            algebra,
            ..self.clone()
        }
    }

    pub fn flat(&self) -> FlatModule {
        self.flat_at(self.algebra)
    }

    pub fn flat_at(&self, algebra: TruncAlgebra) -> FlatModule {
        let ring = algebra.ring();
        let basis = algebra.basis();
        let rels: Vec<Vec<_>> = self
            .relations
            .iter()
            .map(|rel| rel.iter().map(|f| f.to_series(ring, &basis)).collect())
            .collect();
        FlatModule::new(algebra, self.generators, &rels)
    }

    /// The flattened module when it provably equals the true `X`.
    ///
    /// With `J = (p^N, deg >= D)` and `J' = (p^{N+1}, deg >= D+1) ⊆ mJ`, equal
    /// sizes of `X/JX` and `X/J'X` give `JX ⊆ J'X ⊆ mJX`, so `JX = 0` by
    /// Nakayama and `X` is finite and faithfully represented.
    pub fn certify_finite(&self) -> Option<FlatModule> {
        certify_at(self, self.algebra)
    }

    /// `log_p |X / m^k X|` for `k = 0..=min(N, D)`; exact because the
    /// truncation ideal lies inside `m^k` in that range.
    pub fn hilbert_samuel(&self) -> Vec<u64> {
        let flat = self.flat();
        let top = self.algebra.precision.min(self.algebra.degree_cap);
        (0..=top)
            .map(|k| {
                flat.with_extra_rows(&flat.maximal_ideal_power(k))
                    .log_size()
            })
            .collect()
    }
}

pub(crate) fn certify_at(pres: &ModulePresentation, algebra: TruncAlgebra) -> Option<FlatModule> {
    let coarse = pres.flat_at(algebra);
    let fine = pres.flat_at(algebra.refined().ok()?);
    (coarse.log_size() == fine.log_size()).then_some(coarse)
}
