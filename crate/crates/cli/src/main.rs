use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;

use iwasawa_cli::koszul::{self, KoszulInput};
use iwasawa_cli::output::{write_certificate, write_scan};
use iwasawa_cli::scan::check_cached;
use iwasawa_cli::{scan, Cache, CliError, Format, Parameters};

#[derive(Parser)]
#[command(
    name = "iwasawa",
    version,
    about = "Certify Greenberg's conjecture for cyclotomic fields of prime conductor"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Level n of the characteristic series approximation.
    #[arg(long = "level", global = true, default_value_t = 1)]
    level: u32,
    /// Coefficient precision N.
    #[arg(long = "prec", global = true, default_value_t = 2)]
    prec: u32,
    /// Degree cap D.
    #[arg(long = "deg", global = true, default_value_t = 4)]
    deg: u32,
    /// Vandiver witness primes tried per index.
    #[arg(long = "witnesses", global = true, default_value_t = 8)]
    witnesses: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Certificate cache directory.
    #[arg(long = "cache-dir", global = true, default_value = ".iwasawa-cache")]
    cache_dir: PathBuf,
    /// Do not read or write the cache.
    #[arg(long = "no-cache", global = true)]
    no_cache: bool,
    /// Worker threads for scans.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Certificate for one prime.
    Check { p: u64 },
    /// Certificates for all odd primes up to a bound, with a summary.
    Scan { p_max: u64 },
    /// Koszul cohomology of a module presentation.
    Koszul { file: PathBuf },
    /// Cache maintenance.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand)]
enum CacheAction {
    /// List cached certificates.
    List,
    /// Recompute a random 5% sample and report differences.
    Verify {
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Remove all cached certificates.
    Clear,
}

fn warn(e: &CliError) {
    eprintln!("warning: {e}");
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e)
            if e.chain().any(|c| {
                c.downcast_ref::<io::Error>()
                    .is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe)
            }) =>
        {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let c = &cli.common;
    let params = Parameters {
        level: c.level,
        precision: c.prec,
        degree_cap: c.deg,
        witness_budget: c.witnesses,
    };
    let cache = (!c.no_cache).then(|| Cache::new(&c.cache_dir));
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Check { p } => {
            let cert = check_cached(p, &params, cache.as_ref(), &warn)?;
            write_certificate(&mut out, &cert, c.format)?;
        }
        Command::Scan { p_max } => {
            let report = scan(p_max, &params, c.jobs, cache.as_ref(), &warn)?;
            write_scan(&mut out, &report, c.format)?;
        }
        Command::Koszul { file } => {
            let text = std::fs::read_to_string(&file)
                .with_context(|| format!("reading {}", file.display()))?;
            let report = koszul::run(&KoszulInput::parse(&text)?)?;
            koszul::write_report(&mut out, &report, c.format)?;
        }
        Command::Cache { action } => {
            let cache = Cache::new(&c.cache_dir);
            match action {
                CacheAction::List => {
                    let (good, bad) = cache.list()?;
                    for cert in &good {
                        writeln!(
                            out,
                            "{}\t{}",
                            Cache::file_name(cert.p, &cert.parameters),
                            cert.verdict.as_str()
                        )?;
                    }
                    for e in &bad {
                        warn(e);
                    }
                    if !bad.is_empty() {
                        return Ok(ExitCode::from(1));
                    }
                }
                CacheAction::Verify { seed } => {
                    let mut rng = match seed {
                        Some(s) => rand::rngs::StdRng::seed_from_u64(s),
                        None => rand::rngs::StdRng::from_entropy(),
                    };
                    let report = cache.verify(&mut rng)?;
                    serde_json::to_writer_pretty(&mut out, &report)?;
                    writeln!(out)?;
                    for path in &report.corrupt {
                        eprintln!("warning: corrupt cache entry {}", path.display());
                    }
                    if !report.mismatched.is_empty() || !report.corrupt.is_empty() {
                        return Ok(ExitCode::from(1));
                    }
                }
                CacheAction::Clear => {
                    let n = cache.clear()?;
                    writeln!(out, "removed {n} entries")?;
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
