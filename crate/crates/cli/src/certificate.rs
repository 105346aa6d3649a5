//! Per-prime certificates: irregularity, then Vandiver, then the
//! characteristic series, stopping at the first stage that fails.

use serde::{Deserialize, Serialize};

use iwasawa_core::irregular::{irregular_indices, is_odd_prime};
use iwasawa_core::lfunc::{condition2_at, Condition2, LfuncError};
use iwasawa_core::vandiver::{vandiver_outcome, VandiverStatus, Witness};

use crate::error::CliError;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Everything a verdict depends on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Parameters {
    /// Level `n` of the Stickelberger approximation.
    pub level: u32,
    /// Coefficient precision `N`.
    pub precision: u32,
    /// Degree cap `D`.
    pub degree_cap: u32,
    /// Number of Vandiver witness primes tried per index.
    pub witness_budget: usize,
}

impl Default for Parameters {
    fn default() -> Self {
        Self {
            level: 1,
            precision: 2,
            degree_cap: 4,
            witness_budget: 8,
        }
    }
}

impl Parameters {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.level == 0 {
            return Err(CliError::Parameters("level must be at least 1".into()));
        }
        if self.precision < 2 {
            return Err(CliError::Parameters(
                "precision must be at least 2 to read c mod p".into(),
            ));
        }
        if self.degree_cap <= 1 {
            return Err(CliError::Parameters("degree cap must be at least 2".into()));
        }
        if self.witness_budget == 0 {
            return Err(CliError::Parameters(
                "witness budget must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    RegularTrivial,
    #[serde(rename = "CERTIFIED_BY_THEOREM_1")]
    CertifiedByTheorem1,
    NotCovered,
    Indeterminate,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::RegularTrivial => "REGULAR_TRIVIAL",
            Verdict::CertifiedByTheorem1 => "CERTIFIED_BY_THEOREM_1",
            Verdict::NotCovered => "NOT_COVERED",
            Verdict::Indeterminate => "INDETERMINATE",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition2Value {
    True,
    False,
    Indeterminate,
    NotApplicable,
}

impl Condition2Value {
    pub fn as_str(&self) -> &'static str {
        match self {
            Condition2Value::True => "true",
            Condition2Value::False => "false",
            Condition2Value::Indeterminate => "indeterminate",
            Condition2Value::NotApplicable => "not_applicable",
        }
    }
}

impl From<Condition2> for Condition2Value {
    fn from(c: Condition2) -> Self {
        match c {
            Condition2::True => Condition2Value::True,
            Condition2::False => Condition2Value::False,
            Condition2::Indeterminate => Condition2Value::Indeterminate,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VandiverEntry {
    pub k: u64,
    pub status: VandiverStatus,
    pub witnesses: Vec<Witness>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Irregular,
    Vandiver,
    Lfunc,
}

impl Stage {
    pub fn as_str(&self) -> &'static str {
        match self {
            Stage::Irregular => "irregular",
            Stage::Vandiver => "vandiver",
            Stage::Lfunc => "lfunc",
        }
    }
}

/// Residues (`c_mod_p`) are decimal strings; per-index lists follow
/// `irregular_indices`, with `null` for stages that did not run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeCertificate {
    pub p: u64,
    pub regular: bool,
    pub irregular_indices: Vec<u64>,
    pub index_of_irregularity: usize,
    pub vandiver: Vec<VandiverEntry>,
    pub lambda: Vec<Option<u32>>,
    pub mu: Vec<Option<u32>>,
    pub c_mod_p: Vec<Option<String>>,
    pub condition1: bool,
    pub condition2: Condition2Value,
    pub verdict: Verdict,
    pub failing_stage: Option<Stage>,
    pub tool_version: String,
    pub parameters: Parameters,
}

/// Runs the pipeline for one prime.
pub fn certify(p: u64, params: &Parameters) -> Result<PrimeCertificate, CliError> {
    params.validate()?;
    if !is_odd_prime(p) {
        return Err(CliError::NotOddPrime(p));
    }
    let rec = irregular_indices(p).map_err(|_| CliError::NotOddPrime(p))?;
    let count = rec.indices.len();
    let mut cert = PrimeCertificate {
        p,
        regular: rec.is_regular(),
        irregular_indices: rec.indices.clone(),
        index_of_irregularity: rec.index_of_irregularity,
        vandiver: Vec::new(),
        lambda: vec![None; count],
        mu: vec![None; count],
        c_mod_p: vec![None; count],
        condition1: false,
        condition2: Condition2Value::NotApplicable,
        verdict: Verdict::RegularTrivial,
        failing_stage: None,
        tool_version: TOOL_VERSION.to_string(),
        parameters: *params,
    };
    if cert.regular {
        return Ok(cert);
    }
    if count != 1 {
        cert.verdict = Verdict::NotCovered;
        cert.failing_stage = Some(Stage::Irregular);
        return Ok(cert);
    }
    let k = rec.indices[0];
    let outcome = vandiver_outcome(p, k, params.witness_budget)
        .map_err(|e| CliError::Parameters(e.to_string()))?;
    cert.vandiver.push(VandiverEntry {
        k,
        status: outcome.status,
        witnesses: outcome.witnesses,
    });
    if outcome.status != VandiverStatus::Holds {
        cert.verdict = Verdict::Indeterminate;
        cert.failing_stage = Some(Stage::Vandiver);
        return Ok(cert);
    }
    cert.condition1 = true;
    let report = match condition2_at(p, &[k], params.level, params.precision, params.degree_cap) {
        Ok(report) => report,
        Err(LfuncError::Parameters(msg)) => return Err(CliError::Parameters(msg)),
        Err(_) => {
            cert.condition2 = Condition2Value::Indeterminate;
            cert.verdict = Verdict::Indeterminate;
            cert.failing_stage = Some(Stage::Lfunc);
            return Ok(cert);
        }
    };
    let data = &report.per_index[0];
    cert.lambda[0] = data.lambda;
    cert.mu[0] = data.mu;
    cert.c_mod_p[0] = data.c_mod_p.map(|c| c.to_string());
    cert.condition2 = report.value.into();
    match report.value {
        Condition2::True => cert.verdict = Verdict::CertifiedByTheorem1,
        Condition2::False => {
            cert.verdict = Verdict::NotCovered;
            cert.failing_stage = Some(Stage::Lfunc);
        }
        Condition2::Indeterminate => {
            cert.verdict = Verdict::Indeterminate;
            cert.failing_stage = Some(Stage::Lfunc);
        }
    }
    Ok(cert)
}
