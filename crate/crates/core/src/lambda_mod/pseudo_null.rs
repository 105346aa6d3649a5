//! Pseudo-nullity: annihilator of height at least two, i.e. Krull dimension
//! at most `r - 1`.

use serde::{Deserialize, Serialize};

use super::poly::Poly;
use super::presentation::ModulePresentation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PseudoNullVerdict {
    PseudoNull,
    NotPseudoNull,
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeclaredType {
    /// `X = ⊕ Λ/(f_i)` with every `f_i ≠ 0`.
    Elementary(Vec<Poly>),
    General,
}

/// Krull dimension read off the Hilbert–Samuel lengths, when the window is
/// long enough to show the eventual shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimensionEstimate {
    Zero,
    One,
    AtLeastTwo,
    Unknown,
}

pub fn dimension_estimate(lengths: &[u64]) -> DimensionEstimate {
    let h: Vec<u64> = lengths.windows(2).map(|w| w[1] - w[0]).collect();
    if h.len() < 3 {
        return DimensionEstimate::Unknown;
    }
    let tail = &h[h.len() - 3..];
    if tail[2] == 0 {
        DimensionEstimate::Zero
    } else if tail[0] == tail[1] && tail[1] == tail[2] {
        DimensionEstimate::One
    } else if tail[0] < tail[1] && tail[1] < tail[2] {
        DimensionEstimate::AtLeastTwo
    } else {
        DimensionEstimate::Unknown
    }
}

/// Elementary modules are pseudo-null exactly when zero, i.e. when every
/// `f_i` is a unit. General modules: a certified finite module is
/// pseudo-null; otherwise the dimension estimate decides when it can.
pub fn pseudo_null_test(module: &ModulePresentation, declared: &DeclaredType) -> PseudoNullVerdict {
    let r = module.vars();
    match declared {
        DeclaredType::Elementary(fs) => {
            let p = module.p() as i128;
            if fs.iter().any(|f| f.constant_term() % p == 0) {
                PseudoNullVerdict::NotPseudoNull
            } else {
                PseudoNullVerdict::PseudoNull
            }
        }
        DeclaredType::General => {
            if module.certify_finite().is_some() {
                return PseudoNullVerdict::PseudoNull;
            }
            let dim = match dimension_estimate(&module.hilbert_samuel()) {
                DimensionEstimate::Zero => 0,
                DimensionEstimate::One => 1,
                DimensionEstimate::AtLeastTwo if r <= 2 => return PseudoNullVerdict::NotPseudoNull,
                _ => return PseudoNullVerdict::Indeterminate,
            };
            if dim < r {
                PseudoNullVerdict::PseudoNull
            } else {
                PseudoNullVerdict::NotPseudoNull
            }
        }
    }
}
