//! Finite-level approximation of the adjoint `E(X)`, the Pontryagin dual of
//! `lim_n H^r(x'_n, X)` with `H^r(x'_n, X) = X / ω_n X` and transition maps
//! multiplication by `∏_i ν_{n+1,n}(T_i)`.

use serde::{Deserialize, Serialize};

use super::algebra::{FlatModule, TruncAlgebra};
use super::group::CohomologyGroup;
use super::presentation::ModulePresentation;
use super::LambdaError;
use crate::modarith::linalg::{preimage, subquotient_exponents};
use crate::modarith::{ModMatrix, TruncatedSeries};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AdjointResult {
    /// The `p^cap`-torsion of the limit, reached at `level`.
    Stable {
        level: u32,
        group: CohomologyGroup,
    },
    Indeterminate {
        levels_tried: u32,
    },
}

/// `∏_i ν_{n+1,n}(T_i)` with `ν_{n+1,n}(T) = Σ_{j<p} (1 + T)^{j p^n}`.
fn transition(alg: &TruncAlgebra, n: u32) -> TruncatedSeries {
    let ring = alg.ring();
    let basis = alg.basis();
    let one = TruncatedSeries::one(ring, &basis);
    (0..alg.vars).fold(one.clone(), |acc, var| {
        let step = TruncatedSeries::omega(ring, &basis, n, var)
            .add(&one)
            .expect("same algebra");
        let mut power = one.clone();
        let mut sum = TruncatedSeries::zero(ring, &basis);
        for _ in 0..alg.p {
            sum = sum.add(&power).expect("same algebra");
            power = power.mul(&step).expect("same algebra");
        }
        acc.mul(&sum).expect("same algebra")
    })
}

/// `X / (ω_n(T_1), .., ω_n(T_r)) X` flattened in `alg`.
fn layer_at(module: &ModulePresentation, alg: TruncAlgebra, n: u32) -> FlatModule {
    let ring = alg.ring();
    let basis = alg.basis();
    let g = module.generators;
    let mut rels = Vec::with_capacity(alg.vars * g);
    for var in 0..alg.vars {
        let w = TruncatedSeries::omega(ring, &basis, n, var);
        for j in 0..g {
            let mut rel = vec![TruncatedSeries::zero(ring, &basis); g];
            rel[j] = w.clone();
            rels.push(rel);
        }
    }
    module.flat_at(alg).with_relations(&rels)
}

/// The layer when its finiteness is certified (same size one step finer).
fn certified_layer(module: &ModulePresentation, alg: TruncAlgebra, n: u32) -> Option<FlatModule> {
    let coarse = layer_at(module, alg, n);
    let fine = layer_at(module, alg.refined().ok()?, n);
    (coarse.log_size() == fine.log_size()).then_some(coarse)
}

/// Approximates `E(X)` by `lim_n (X/ω_n X)[p^cap]`, which has the invariant
/// factors of `E(X)/p^cap` when `E(X)` is a finitely generated `Z_p`-module.
///
/// The presentation is re-read at a working precision covering `cap` and
/// every level up to `max_level`. Each layer must be certified finite; the
/// first one failing is `NotFinite`, a later failure is indeterminate. The
/// limit is declared stable at level `n` once the image `K_n` of
/// `(X/ω_n X)[p^cap]` in the next layer has the size of `K_{n+1}` and maps
/// injectively one level further.
pub fn adjoint_e(
    module: &ModulePresentation,
    cap: u32,
    max_level: u32,
) -> Result<AdjointResult, LambdaError> {
    let base = module.algebra;
    let prec = cap + max_level + 4;
    let exhausted = || {
        LambdaError::PrecisionExhausted(format!(
            "working precision {prec} too large for p = {}",
            base.p
        ))
    };
    let work = TruncAlgebra::new(base.p, prec, base.vars, base.degree_cap.max(prec))
        .map_err(|_| exhausted())?;
    work.refined().map_err(|_| exhausted())?;
    let ring = work.ring();

    let mut layers: Vec<FlatModule> = Vec::new();
    let mut images: Vec<ModMatrix> = Vec::new();
    for n in 1..=max_level + 2 {
        let Some(layer) = certified_layer(module, work, n) else {
            if n == 1 {
                return Err(LambdaError::NotFinite(format!(
                    "X / ω_1 X is not certified finite at precision {prec}"
                )));
            }
            return Ok(AdjointResult::Indeterminate {
                levels_tried: n - 1,
            });
        };
        layers.push(layer);
        if n == 1 {
            continue;
        }
        // K_{n-1}: image of the p^cap-torsion of layer n-1 in layer n
        let prev = &layers[layers.len() - 2];
        let pe = scaled(
            &ModMatrix::identity(ring, prev.ambient()),
            ring.p_power(cap),
        );
        let torsion = preimage(&pe, &prev.relations);
        let phi = prev.scalar(&transition(&work, n - 1));
        images.push(torsion.mul(&phi));
        if images.len() >= 2 {
            let k = images.len() - 2;
            let level = n - 2;
            let here = &layers[k + 1];
            let next = &layers[k + 2];
            let size_k = log_image(&images[k], here);
            let size_k1 = log_image(&images[k + 1], next);
            let pushed = images[k].mul(&here.scalar(&transition(&work, level + 1)));
            if size_k == size_k1 && log_image(&pushed, next) == size_k {
                let group = CohomologyGroup::finite(
                    base.p,
                    subquotient_exponents(&images[k], &here.relations),
                );
                return Ok(AdjointResult::Stable { level, group });
            }
            if level >= max_level {
                break;
            }
        }
    }
    Ok(AdjointResult::Indeterminate {
        levels_tried: max_level,
    })
}

fn scaled(m: &ModMatrix, c: u64) -> ModMatrix {
    let ring = m.ring();
    let mut out = m.clone();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out.set(i, j, ring.mul(m.get(i, j), c));
        }
    }
    out
}

/// `log_p` of the image of `rows` in the quotient `layer`.
fn log_image(rows: &ModMatrix, layer: &FlatModule) -> u64 {
    subquotient_exponents(rows, &layer.relations)
        .iter()
        .map(|&e| e as u64)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda_mod::poly::Poly;

    fn alg() -> TruncAlgebra {
        TruncAlgebra::new(3, 3, 1, 6).unwrap()
    }

    #[test]
    fn line_with_t_acting_as_p() {
        let x = ModulePresentation::cyclic(alg(), &[Poly::var(1, 0).sub(&Poly::constant(1, 3))])
            .unwrap();
        match adjoint_e(&x, 3, 5).unwrap() {
            AdjointResult::Stable { group, .. } => {
                assert_eq!(group, CohomologyGroup::finite(3, vec![3]))
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn finite_module_has_trivial_adjoint() {
        let x =
            ModulePresentation::cyclic(alg(), &[Poly::constant(1, 3), Poly::var(1, 0)]).unwrap();
        match adjoint_e(&x, 3, 4).unwrap() {
            AdjointResult::Stable { group, .. } => assert!(group.is_zero()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn trivial_action_is_not_finite() {
        let x = ModulePresentation::cyclic(alg(), &[Poly::var(1, 0)]).unwrap();
        assert!(matches!(
            adjoint_e(&x, 3, 4),
            Err(LambdaError::NotFinite(_))
        ));
    }

    #[test]
    fn transition_is_omega_ratio() {
        let a = TruncAlgebra::new(3, 4, 1, 12).unwrap();
        let ring = a.ring();
        let basis = a.basis();
        let lhs = transition(&a, 1)
            .mul(&TruncatedSeries::omega(ring, &basis, 1, 0))
            .unwrap();
        assert_eq!(lhs, TruncatedSeries::omega(ring, &basis, 2, 0));
    }
}
