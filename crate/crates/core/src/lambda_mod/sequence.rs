use serde::{Deserialize, Serialize};

use super::algebra::TruncAlgebra;
use super::poly::Poly;
use super::LambdaError;
use crate::modarith::TruncatedSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Flavor {
    Omega,
    Nu,
    Custom,
}

/// One entry of a sequence. The `ω_n` and `ν_n` entries are kept symbolic
/// because their integer coefficients outgrow machine words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Element {
    PPower(u32),
    Omega { var: usize, n: u32 },
    Nu { var: usize, n: u32 },
    Poly(Poly),
}

impl Element {
    pub fn to_series(&self, alg: &TruncAlgebra) -> TruncatedSeries {
        let ring = alg.ring();
        let basis = alg.basis();
        match self {
            Element::PPower(n) => TruncatedSeries::constant(ring, &basis, ring.p_power(*n)),
            Element::Omega { var, n } => TruncatedSeries::omega(ring, &basis, *n, *var),
            Element::Nu { var, n } => TruncatedSeries::nu(ring, &basis, *n, *var),
            Element::Poly(f) => f.to_series(ring, &basis),
        }
    }
}

/// A Koszul sequence `x`: the full `x_n = (p^n, y_n(T_1), .., y_n(T_r))`, the
/// primed `x'_n = (y_n(T_1), .., y_n(T_r))` for `y = ω` or `ν`, or a custom list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequence {
    pub vars: usize,
    pub flavor: Flavor,
    pub level: u32,
    pub primed: bool,
    pub elements: Vec<Element>,
}

impl Sequence {
    pub fn omega(vars: usize, level: u32) -> Self {
        Self::family(vars, Flavor::Omega, level, false)
    }

    pub fn nu(vars: usize, level: u32) -> Self {
        Self::family(vars, Flavor::Nu, level, false)
    }

    pub fn omega_primed(vars: usize, level: u32) -> Self {
        Self::family(vars, Flavor::Omega, level, true)
    }

    pub fn nu_primed(vars: usize, level: u32) -> Self {
        Self::family(vars, Flavor::Nu, level, true)
    }

    /// The sequence `x_n` (or `x'_n`) of the given flavor.
    pub fn family(vars: usize, flavor: Flavor, level: u32, primed: bool) -> Self {
        assert!(
            flavor != Flavor::Custom,
            "custom sequences are built from polynomials"
        );
        let mut elements = Vec::with_capacity(vars + 1);
        if !primed {
            elements.push(Element::PPower(level));
        }
        for var in 0..vars {
            elements.push(match flavor {
                Flavor::Omega => Element::Omega { var, n: level },
                _ => Element::Nu { var, n: level },
            });
        }
        Self {
            vars,
            flavor,
            level,
            primed,
            elements,
        }
    }

    /// A custom sequence of length `r` or `r + 1`.
    pub fn custom(vars: usize, elements: Vec<Poly>) -> Result<Self, LambdaError> {
        if elements.len() != vars && elements.len() != vars + 1 {
            return Err(LambdaError::SequenceLength {
                got: elements.len(),
                expected: format!("{} or {}", vars, vars + 1),
            });
        }
        if elements.iter().any(|f| f.vars() != vars) {
            return Err(LambdaError::Invalid(
                "sequence entry has the wrong number of variables".into(),
            ));
        }
        Ok(Self {
            vars,
            flavor: Flavor::Custom,
            level: 0,
            primed: elements.len() == vars,
            elements: elements.into_iter().map(Element::Poly).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn series(&self, alg: &TruncAlgebra) -> Vec<TruncatedSeries> {
        self.elements.iter().map(|e| e.to_series(alg)).collect()
    }

    /// Splits `x_n = (p^n) ⌢ x'_n` into `n` and `x'_n`.
    pub fn split_p_power(&self, p: u64) -> Result<(u32, Sequence), LambdaError> {
        if self.primed {
            return Err(LambdaError::Invalid(
                "sequence has no leading p-power".into(),
            ));
        }
        let n = match &self.elements[0] {
            Element::PPower(n) => *n,
            Element::Poly(f) => p_power_exponent(f, p)
                .ok_or_else(|| LambdaError::Invalid("leading entry is not a power of p".into()))?,
            _ => {
                return Err(LambdaError::Invalid(
                    "leading entry is not a power of p".into(),
                ))
            }
        };
        let mut rest = self.clone();
        rest.elements.remove(0);
        rest.primed = true;
        if rest.flavor == Flavor::Custom {
            rest.level = n;
        }
        Ok((n, rest))
    }
}

fn p_power_exponent(f: &Poly, p: u64) -> Option<u32> {
    let terms: Vec<_> = f.terms().collect();
    if terms.len() != 1 || terms[0].0.iter().any(|&e| e != 0) {
        return None;
    }
    let mut c = *terms[0].1;
    let mut n = 0;
    while c > 1 && c % p as i128 == 0 {
        c /= p as i128;
        n += 1;
    }
    (c == 1).then_some(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        let x = Sequence::omega(2, 1);
        assert_eq!(x.len(), 3);
        assert_eq!(
            x.split_p_power(3).unwrap(),
            (1, Sequence::omega_primed(2, 1))
        );
        let alg = TruncAlgebra::new(3, 3, 2, 5).unwrap();
        let s = x.series(&alg);
        assert_eq!(s[0].constant_term(), 3);
        assert_eq!(s[1].coefficient(&[1, 0]), 3);
        assert_eq!(s[1].coefficient(&[3, 0]), 1);
        assert!(Sequence::custom(2, vec![Poly::var(2, 0)]).is_err());
        let c = Sequence::custom(1, vec![Poly::constant(1, 9), Poly::var(1, 0)]).unwrap();
        assert_eq!(c.split_p_power(3).unwrap().0, 2);
        assert!(
            Sequence::custom(1, vec![Poly::constant(1, 6), Poly::var(1, 0)])
                .unwrap()
                .split_p_power(3)
                .is_err()
        );
    }
}
