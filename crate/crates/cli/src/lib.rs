//! Front end for the certification pipeline and the Λ-module engine.

pub mod cache;
pub mod certificate;
pub mod error;
pub mod koszul;
pub mod output;
pub mod scan;

pub use cache::Cache;
pub use certificate::{certify, Parameters, PrimeCertificate, Verdict};
pub use error::CliError;
pub use output::Format;
pub use scan::{scan, ScanReport, ScanSummary};
