use std::io::Write;

use crate::certificate::PrimeCertificate;
use crate::error::CliError;
use crate::scan::ScanReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub const CSV_HEADER: [&str; 11] = [
    "p",
    "regular",
    "index_of_irregularity",
    "irregular_indices",
    "vandiver",
    "lambda",
    "mu",
    "c_mod_p",
    "condition1",
    "condition2",
    "verdict",
];

fn join<T>(items: &[T], f: impl Fn(&T) -> String) -> String {
    items.iter().map(f).collect::<Vec<_>>().join(";")
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map_or_else(String::new, T::to_string)
}

pub fn csv_record(c: &PrimeCertificate) -> Vec<String> {
    vec![
        c.p.to_string(),
        c.regular.to_string(),
        c.index_of_irregularity.to_string(),
        join(&c.irregular_indices, u64::to_string),
        join(&c.vandiver, |v| {
            serde_json::to_value(v.status)
                .ok()
                .and_then(|s| s.as_str().map(String::from))
                .unwrap_or_default()
        }),
        join(&c.lambda, opt),
        join(&c.mu, opt),
        join(&c.c_mod_p, opt),
        c.condition1.to_string(),
        c.condition2.as_str().to_string(),
        c.verdict.as_str().to_string(),
    ]
}

pub fn write_certificates_csv(
    out: &mut dyn Write,
    certs: &[PrimeCertificate],
) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(&mut *out);
    w.write_record(CSV_HEADER)?;
    for c in certs {
        w.write_record(csv_record(c))?;
    }
    w.flush().map_err(|e| CliError::io("<stdout>", e))?;
    Ok(())
}

pub fn write_scan(
    out: &mut dyn Write,
    report: &ScanReport,
    format: Format,
) -> Result<(), CliError> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, report)?;
            writeln!(out).map_err(|e| CliError::io("<stdout>", e))?;
        }
        Format::Csv => {
            write_certificates_csv(out, &report.certificates)?;
            let s = &report.summary;
            let lines = [
                format!("# primes,{}", s.primes),
                format!("# regular_fraction,{:.6}", s.regular_fraction),
                format!("# condition1_fraction,{:.6}", s.condition1_fraction),
                format!("# certified_fraction,{:.6}", s.certified_fraction),
                format!("# not_covered,{}", s.not_covered),
                format!("# indeterminate,{}", s.indeterminate),
            ];
            for l in lines {
                writeln!(out, "{l}").map_err(|e| CliError::io("<stdout>", e))?;
            }
        }
    }
    Ok(())
}

pub fn write_certificate(
    out: &mut dyn Write,
    cert: &PrimeCertificate,
    format: Format,
) -> Result<(), CliError> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, cert)?;
            writeln!(out).map_err(|e| CliError::io("<stdout>", e))?;
            Ok(())
        }
        Format::Csv => write_certificates_csv(out, std::slice::from_ref(cert)),
    }
}
