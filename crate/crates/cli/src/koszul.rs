//! `koszul <file>`: cohomology, exact-sequence checks and pseudo-nullity for
//! a module presentation read from JSON.

use std::io::Write;

use serde::{Deserialize, Serialize};

use iwasawa_core::irregular::is_odd_prime;
use iwasawa_core::lambda_mod::{
    exact_sequence_check, koszul_cohomology_all, pseudo_null_test, CohomologyGroup, DeclaredType,
    ExactSequenceCheck, Flavor, ModulePresentation, Poly, PseudoNullVerdict, Sequence,
    TruncAlgebra,
};

use crate::error::CliError;
use crate::output::Format;

/// A term `[coeff, e_1, .., e_r]`.
pub type Term = Vec<i64>;
/// A polynomial as a list of terms.
pub type PolyJson = Vec<Term>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KoszulInput {
    pub p: u64,
    pub precision: u32,
    pub r: usize,
    pub degree_cap: u32,
    pub generators: usize,
    /// Each relation is one polynomial per generator.
    pub relations: Vec<Vec<PolyJson>>,
    #[serde(default = "default_levels")]
    pub levels: Vec<u32>,
    #[serde(default = "default_flavor")]
    pub flavor: Flavor,
    /// Entries of a `CUSTOM` sequence.
    #[serde(default)]
    pub sequence: Option<Vec<PolyJson>>,
    /// Declares `X = ⊕ Λ/(f_i)` for the pseudo-nullity test.
    #[serde(default)]
    pub elementary: Option<Vec<PolyJson>>,
}

fn default_levels() -> Vec<u32> {
    vec![1]
}

fn default_flavor() -> Flavor {
    Flavor::Omega
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupReport {
    pub i: usize,
    /// Decimal invariant factors `p^{e_1} <= ...`.
    pub invariant_factors: Vec<String>,
    pub free_rank: usize,
    pub fp_rank: usize,
    pub log_order: Option<u64>,
}

impl GroupReport {
    fn new(i: usize, g: &CohomologyGroup) -> Self {
        Self {
            i,
            invariant_factors: g
                .invariant_factors()
                .iter()
                .map(ToString::to_string)
                .collect(),
            free_rank: g.free_rank,
            fp_rank: g.rank(),
            log_order: g.log_order(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelReport {
    pub level: Option<u32>,
    pub flavor: Flavor,
    pub sequence_length: usize,
    pub cohomology: Vec<GroupReport>,
    pub exact_sequence: Vec<ExactSequenceCheck>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KoszulReport {
    pub p: u64,
    pub r: usize,
    pub precision: u32,
    pub degree_cap: u32,
    pub generators: usize,
    pub levels: Vec<LevelReport>,
    pub pseudo_null: PseudoNullVerdict,
}

fn poly(r: usize, json: &PolyJson) -> Result<Poly, CliError> {
    let mut terms = Vec::with_capacity(json.len());
    for t in json {
        if t.len() != r + 1 {
            return Err(CliError::Schema(format!(
                "term {t:?} must have 1 + {r} entries"
            )));
        }
        let exps = t[1..]
            .iter()
            .map(|&e| {
                u32::try_from(e)
                    .map_err(|_| CliError::Schema(format!("negative exponent in {t:?}")))
            })
            .collect::<Result<Vec<u32>, _>>()?;
        terms.push((t[0], exps));
    }
    Ok(Poly::from_terms(r, &terms))
}

impl KoszulInput {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))
    }

    pub fn presentation(&self) -> Result<ModulePresentation, CliError> {
        if !is_odd_prime(self.p) {
            return Err(CliError::Schema(format!(
                "p = {} is not an odd prime",
                self.p
            )));
        }
        let alg = TruncAlgebra::new(self.p, self.precision, self.r, self.degree_cap)
            .map_err(|e| CliError::Schema(e.to_string()))?;
        let mut rels = Vec::with_capacity(self.relations.len());
        for rel in &self.relations {
            if rel.len() != self.generators {
                return Err(CliError::Schema(format!(
                    "relation has {} polynomials for {} generators",
                    rel.len(),
                    self.generators
                )));
            }
            rels.push(
                rel.iter()
                    .map(|f| poly(self.r, f))
                    .collect::<Result<Vec<_>, _>>()?,
            );
        }
        ModulePresentation::new(alg, self.generators, rels)
            .map_err(|e| CliError::Schema(e.to_string()))
    }

    fn sequences(&self) -> Result<Vec<Sequence>, CliError> {
        match (self.flavor, &self.sequence) {
            (Flavor::Custom, Some(entries)) => {
                let polys = entries
                    .iter()
                    .map(|f| poly(self.r, f))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(vec![
                    Sequence::custom(self.r, polys).map_err(|e| CliError::Schema(e.to_string()))?
                ])
            }
            (Flavor::Custom, None) => {
                Err(CliError::Schema("a CUSTOM flavor needs a sequence".into()))
            }
            (_, Some(_)) => Err(CliError::Schema(
                "sequence entries are only allowed with flavor CUSTOM".into(),
            )),
            (f, None) => {
                if self.levels.is_empty() {
                    return Err(CliError::Schema("levels must not be empty".into()));
                }
                Ok(self
                    .levels
                    .iter()
                    .map(|&n| Sequence::family(self.r, f, n, false))
                    .collect())
            }
        }
    }
}

pub fn run(input: &KoszulInput) -> Result<KoszulReport, CliError> {
    let module = input.presentation()?;
    let mut levels = Vec::new();
    for x in input.sequences()? {
        let groups = koszul_cohomology_all(&x, &module)?;
        let exact_sequence = if x.split_p_power(input.p).is_ok() {
            (0..=x.len())
                .map(|i| exact_sequence_check(&x, &module, i))
                .collect::<Result<Vec<_>, _>>()?
        } else {
            Vec::new()
        };
        levels.push(LevelReport {
            level: (x.flavor != Flavor::Custom).then_some(x.level),
            flavor: x.flavor,
            sequence_length: x.len(),
            cohomology: groups
                .iter()
                .enumerate()
                .map(|(i, g)| GroupReport::new(i, g))
                .collect(),
            exact_sequence,
        });
    }
    let declared = match &input.elementary {
        Some(fs) => DeclaredType::Elementary(
            fs.iter()
                .map(|f| poly(input.r, f))
                .collect::<Result<Vec<_>, _>>()?,
        ),
        None => DeclaredType::General,
    };
    Ok(KoszulReport {
        p: input.p,
        r: input.r,
        precision: input.precision,
        degree_cap: input.degree_cap,
        generators: input.generators,
        levels,
        pseudo_null: pseudo_null_test(&module, &declared),
    })
}

pub fn write_report(
    out: &mut dyn Write,
    report: &KoszulReport,
    format: Format,
) -> Result<(), CliError> {
    let io = |e| CliError::io("<stdout>", e);
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, report)?;
            writeln!(out).map_err(io)?;
        }
        Format::Csv => {
            {
                let mut w = csv::Writer::from_writer(&mut *out);
                w.write_record([
                    "level",
                    "i",
                    "invariant_factors",
                    "free_rank",
                    "fp_rank",
                    "log_order",
                ])?;
                for l in &report.levels {
                    for g in &l.cohomology {
                        w.write_record([
                            l.level.map_or_else(String::new, |n| n.to_string()),
                            g.i.to_string(),
                            g.invariant_factors.join(";"),
                            g.free_rank.to_string(),
                            g.fp_rank.to_string(),
                            g.log_order.map_or_else(String::new, |n| n.to_string()),
                        ])?;
                    }
                }
                w.flush().map_err(io)?;
            }
            for l in &report.levels {
                for c in &l.exact_sequence {
                    writeln!(
                        out,
                        "# exact_sequence,n={},i={},left={},middle={},right={},ok={}",
                        c.n, c.i, c.left, c.middle, c.right, c.ok
                    )
                    .map_err(io)?;
                }
            }
            let verdict = serde_json::to_value(report.pseudo_null)?;
            writeln!(
                out,
                "# pseudo_null,{}",
                verdict.as_str().unwrap_or_default()
            )
            .map_err(io)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schema_violations() {
        let bad_term = r#"{"p":3,"precision":3,"r":1,"degree_cap":6,"generators":1,"relations":[[[[1,1,1]]]]}"#;
        assert!(matches!(
            KoszulInput::parse(bad_term).unwrap().presentation(),
            Err(CliError::Schema(_))
        ));
        let unknown =
            r#"{"p":3,"precision":3,"r":1,"degree_cap":6,"generators":1,"relations":[],"x":1}"#;
        assert!(matches!(
            KoszulInput::parse(unknown),
            Err(CliError::Schema(_))
        ));
        let composite =
            r#"{"p":9,"precision":3,"r":1,"degree_cap":6,"generators":1,"relations":[]}"#;
        assert!(KoszulInput::parse(composite)
            .unwrap()
            .presentation()
            .is_err());
        let wrong_len =
            r#"{"p":3,"precision":3,"r":1,"degree_cap":6,"generators":2,"relations":[[[[1,1]]]]}"#;
        assert!(KoszulInput::parse(wrong_len)
            .unwrap()
            .presentation()
            .is_err());
    }

    #[test]
    fn residue_field() {
        let text = r#"{"p":3,"precision":3,"r":1,"degree_cap":6,"generators":1,
            "relations":[[[[3,0]]],[[[1,1]]]]}"#;
        let report = run(&KoszulInput::parse(text).unwrap()).unwrap();
        let ranks: Vec<usize> = report.levels[0]
            .cohomology
            .iter()
            .map(|g| g.fp_rank)
            .collect();
        assert_eq!(ranks, vec![1, 2, 1]);
        assert!(report.levels[0].exact_sequence.iter().all(|c| c.ok));
        assert_eq!(report.pseudo_null, PseudoNullVerdict::PseudoNull);
    }
}
