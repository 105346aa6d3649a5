use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use iwasawa_core::modarith::primes::primes_up_to;

use crate::cache::{Cache, Lookup};
use crate::certificate::{certify, Parameters, PrimeCertificate, Verdict};
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub p_max: u64,
    pub primes: usize,
    pub regular: usize,
    pub regular_fraction: f64,
    pub condition1: usize,
    pub condition1_fraction: f64,
    pub certified: usize,
    pub certified_fraction: f64,
    pub not_covered: usize,
    pub indeterminate: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub certificates: Vec<PrimeCertificate>,
    pub summary: ScanSummary,
}

/// Certificate for `p`, from the cache when present. Corrupt entries are
/// passed to `warn` and recomputed but not replaced.
pub fn check_cached(
    p: u64,
    params: &Parameters,
    cache: Option<&Cache>,
    warn: &(dyn Fn(&CliError) + Sync),
) -> Result<PrimeCertificate, CliError> {
    let Some(cache) = cache else {
        return certify(p, params);
    };
    match cache.load(p, params) {
        Lookup::Hit(cert) => Ok(cert),
        Lookup::Miss => {
            let cert = certify(p, params)?;
            cache.store(&cert)?;
            Ok(cert)
        }
        Lookup::Corrupt(e) => {
            warn(&e);
            certify(p, params)
        }
    }
}

/// Certificates for every odd prime `<= p_max`, in increasing order of `p`.
pub fn scan(
    p_max: u64,
    params: &Parameters,
    jobs: usize,
    cache: Option<&Cache>,
    warn: &(dyn Fn(&CliError) + Sync),
) -> Result<ScanReport, CliError> {
    if p_max < 5 {
        return Err(CliError::ScanBound(p_max));
    }
    params.validate()?;
    let primes: Vec<u64> = primes_up_to(p_max).into_iter().filter(|&p| p > 2).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::Parameters(e.to_string()))?;
    // largest primes first so the expensive tail does not straggle
    let mut order: Vec<usize> = (0..primes.len()).collect();
    order.reverse();
    let mut results: Vec<(usize, Result<PrimeCertificate, CliError>)> = pool.install(|| {
        order
            .par_iter()
            .map(|&i| (i, check_cached(primes[i], params, cache, warn)))
            .collect()
    });
    results.sort_by_key(|(i, _)| *i);
    let certificates = results
        .into_iter()
        .map(|(_, r)| r)
        .collect::<Result<Vec<_>, _>>()?;
    let summary = summarize(p_max, &certificates);
    Ok(ScanReport {
        certificates,
        summary,
    })
}

pub fn summarize(p_max: u64, certs: &[PrimeCertificate]) -> ScanSummary {
    let total = certs.len();
    let count = |f: &dyn Fn(&PrimeCertificate) -> bool| certs.iter().filter(|c| f(c)).count();
    let frac = |n: usize| {
        if total == 0 {
            0.0
        } else {
            n as f64 / total as f64
        }
    };
    let regular = count(&|c| c.regular);
    let condition1 = count(&|c| c.condition1);
    let certified = count(&|c| c.verdict == Verdict::CertifiedByTheorem1);
    ScanSummary {
        p_max,
        primes: total,
        regular,
        regular_fraction: frac(regular),
        condition1,
        condition1_fraction: frac(condition1),
        certified,
        certified_fraction: frac(certified),
        not_covered: count(&|c| c.verdict == Verdict::NotCovered),
        indeterminate: count(&|c| c.verdict == Verdict::Indeterminate),
    }
}
