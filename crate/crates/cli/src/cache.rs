//! One JSON certificate per `(p, parameters)`. Entries are written through a
//! temporary file and renamed into place, and never overwritten.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::certificate::{certify, Parameters, PrimeCertificate};
use crate::error::CliError;

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

#[derive(Debug)]
pub enum Lookup {
    Hit(PrimeCertificate),
    Miss,
    Corrupt(CliError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub entries: usize,
    pub sampled: Vec<u64>,
    pub mismatched: Vec<u64>,
    pub corrupt: Vec<PathBuf>,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn file_name(p: u64, params: &Parameters) -> String {
        format!(
            "p{}-n{}-N{}-D{}-W{}.json",
            p, params.level, params.precision, params.degree_cap, params.witness_budget
        )
    }

    pub fn path_for(&self, p: u64, params: &Parameters) -> PathBuf {
        self.dir.join(Self::file_name(p, params))
    }

    pub fn load(&self, p: u64, params: &Parameters) -> Lookup {
        let path = self.path_for(p, params);
        match fs::read(&path) {
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Lookup::Miss,
            Err(e) => Lookup::Corrupt(CliError::io(&path, e)),
            Ok(bytes) => match parse_entry(&path, &bytes) {
                Ok(cert) if cert.p == p && cert.parameters == *params => Lookup::Hit(cert),
                Ok(_) => Lookup::Corrupt(CliError::CorruptCache {
                    path,
                    reason: "entry does not match its file name".into(),
                }),
                Err(e) => Lookup::Corrupt(e),
            },
        }
    }

    /// Writes a new entry. An existing file is left untouched.
    pub fn store(&self, cert: &PrimeCertificate) -> Result<bool, CliError> {
        fs::create_dir_all(&self.dir).map_err(|e| CliError::io(&self.dir, e))?;
        let path = self.path_for(cert.p, &cert.parameters);
        if path.exists() {
            return Ok(false);
        }
        let mut tmp =
            tempfile::NamedTempFile::new_in(&self.dir).map_err(|e| CliError::io(&self.dir, e))?;
        serde_json::to_writer_pretty(&mut tmp, cert)?;
        tmp.write_all(b"\n")
            .map_err(|e| CliError::io(tmp.path(), e))?;
        match tmp.persist_noclobber(&path) {
            Ok(_) => Ok(true),
            Err(e) if e.error.kind() == std::io::ErrorKind::AlreadyExists => Ok(false),
            Err(e) => Err(CliError::io(&path, e.error)),
        }
    }

    /// Certificate files, sorted by name.
    pub fn entries(&self) -> Result<Vec<PathBuf>, CliError> {
        let read = match fs::read_dir(&self.dir) {
            Ok(r) => r,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(CliError::io(&self.dir, e)),
        };
        let mut out: Vec<PathBuf> = read
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| is_entry_name(p))
            .collect();
        out.sort();
        Ok(out)
    }

    /// Parses every entry; corrupt ones are returned separately.
    pub fn list(&self) -> Result<(Vec<PrimeCertificate>, Vec<CliError>), CliError> {
        let mut good = Vec::new();
        let mut bad = Vec::new();
        for path in self.entries()? {
            match fs::read(&path)
                .map_err(|e| CliError::io(&path, e))
                .and_then(|b| parse_entry(&path, &b))
            {
                Ok(c) => good.push(c),
                Err(e) => bad.push(e),
            }
        }
        good.sort_by_key(|c| {
            (
                c.p,
                c.parameters.level,
                c.parameters.precision,
                c.parameters.degree_cap,
            )
        });
        Ok((good, bad))
    }

    /// Recomputes a random 5% sample (at least one entry) and compares.
    pub fn verify(&self, rng: &mut impl Rng) -> Result<VerifyReport, CliError> {
        let paths = self.entries()?;
        let mut good = Vec::new();
        let mut corrupt = Vec::new();
        for path in &paths {
            match fs::read(path)
                .map_err(|e| CliError::io(path, e))
                .and_then(|b| parse_entry(path, &b))
            {
                Ok(c) => good.push(c),
                Err(_) => corrupt.push(path.clone()),
            }
        }
        let want = if good.is_empty() {
            0
        } else {
            good.len().div_ceil(20)
        };
        let mut sample: Vec<PrimeCertificate> = good.choose_multiple(rng, want).cloned().collect();
        sample.sort_by_key(|c| c.p);
        let mut mismatched = Vec::new();
        for cert in &sample {
            let fresh = certify(cert.p, &cert.parameters)?;
            if fresh != *cert {
                mismatched.push(cert.p);
            }
        }
        Ok(VerifyReport {
            entries: paths.len(),
            sampled: sample.iter().map(|c| c.p).collect(),
            mismatched,
            corrupt,
        })
    }

    /// Removes every certificate file; returns how many were removed.
    pub fn clear(&self) -> Result<usize, CliError> {
        let entries = self.entries()?;
        for path in &entries {
            fs::remove_file(path).map_err(|e| CliError::io(path, e))?;
        }
        Ok(entries.len())
    }
}

fn is_entry_name(path: &Path) -> bool {
    let Some(name) = path.file_name().and_then(|n| n.to_str()) else {
        return false;
    };
    name.starts_with('p') && name.ends_with(".json") && name.contains("-n") && name.contains("-W")
}

fn parse_entry(path: &Path, bytes: &[u8]) -> Result<PrimeCertificate, CliError> {
    serde_json::from_slice(bytes).map_err(|e| CliError::CorruptCache {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn round_trip_and_no_clobber() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let params = Parameters::default();
        assert!(matches!(cache.load(37, &params), Lookup::Miss));
        let cert = certify(37, &params).unwrap();
        assert!(cache.store(&cert).unwrap());
        assert!(!cache.store(&cert).unwrap());
        match cache.load(37, &params) {
            Lookup::Hit(c) => assert_eq!(c, cert),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            cache
                .path_for(37, &params)
                .file_name()
                .unwrap()
                .to_str()
                .unwrap(),
            "p37-n1-N2-D4-W8.json"
        );
    }

    #[test]
    fn corrupt_entries_are_reported_and_kept() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let params = Parameters::default();
        let path = cache.path_for(59, &params);
        fs::write(&path, b"{ not json").unwrap();
        assert!(matches!(cache.load(59, &params), Lookup::Corrupt(_)));
        let cert = certify(59, &params).unwrap();
        assert!(!cache.store(&cert).unwrap());
        assert_eq!(fs::read(&path).unwrap(), b"{ not json");
        let (good, bad) = cache.list().unwrap();
        assert!(good.is_empty());
        assert_eq!(bad.len(), 1);
    }

    #[test]
    fn verify_samples_at_least_one() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let params = Parameters::default();
        for p in [3, 5, 7, 37] {
            cache.store(&certify(p, &params).unwrap()).unwrap();
        }
        let mut rng = rand::rngs::StdRng::seed_from_u64(1);
        let report = cache.verify(&mut rng).unwrap();
        assert_eq!(report.entries, 4);
        assert_eq!(report.sampled.len(), 1);
        assert!(report.mismatched.is_empty());
        // a tampered entry is caught when sampled
        let mut cert = certify(37, &params).unwrap();
        cert.condition1 = false;
        let only = tempfile::tempdir().unwrap();
        let tampered = Cache::new(only.path());
        tampered.store(&cert).unwrap();
        let report = tampered.verify(&mut rng).unwrap();
        assert_eq!(report.mismatched, vec![37]);
        assert_eq!(cache.clear().unwrap(), 4);
        assert!(cache.entries().unwrap().is_empty());
    }
}
