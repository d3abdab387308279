//! `ahlab`: command-line front end to the double-point interpolation toolkit.

mod cache;
mod commands;
mod config;

use std::process::ExitCode;
use std::time::Instant;

use anyhow::Result;
use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

use cache::Cache;
use commands::{Report, Status};
use config::{Format, GlobalArgs, RunConfig};

#[derive(Parser, Debug)]
#[command(
    name = "ahlab",
    version,
    about = "Interpolation at general double points"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hilbert function of general double points, or of a scheme file.
    Hilbert(commands::HilbertArgs),
    /// Every (n, d, k) over ranges of n and d with k near the critical value.
    Sweep(commands::SweepArgs),
    /// Rank and induction certificate at the critical number of points.
    VerifyAh(commands::VerifyArgs),
    /// Build or check an induction certificate.
    Certificate(commands::CertificateArgs),
    /// Exact witness form for a defective case.
    Witness(commands::WitnessArgs),
    /// Binary forms: Hankel rank, covariant, decomposition.
    Sylvester(commands::SylvesterArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Hilbert(_) => "hilbert",
            Command::Sweep(_) => "sweep",
            Command::VerifyAh(_) => "verify-ah",
            Command::Certificate(_) => "certificate",
            Command::Witness(_) => "witness",
            Command::Sylvester(_) => "sylvester",
        }
    }
}

#[derive(Serialize)]
struct Timing {
    elapsed_ms: u128,
    timestamp: u64,
}

#[derive(Serialize)]
struct Envelope<'a> {
    command: &'a str,
    config: &'a RunConfig,
    cached: bool,
    result: Value,
    timing: Timing,
}

/// Drops per-computation timings so the result is a pure function of the inputs.
fn strip_timings(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("elapsed_ms");
            map.values_mut().for_each(strip_timings);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timings),
        _ => {}
    }
}

fn run<T: Report>(
    cmd: &str,
    cfg: &RunConfig,
    cache: Option<&Cache>,
    key: Option<String>,
    compute: impl FnOnce() -> Result<T>,
) -> Result<Status> {
    let start = Instant::now();
    let key = key.map(|k| format!("{cmd}|{k}|{}", cfg.key()));
    let hit = match (cache, &key) {
        (Some(c), Some(k)) => c.get(k).cloned(),
        _ => None,
    };
    let (result, cached) = match hit {
        Some(v) => (v, true),
        None => {
            let mut v = serde_json::to_value(compute()?)?;
            strip_timings(&mut v);
            if let (Some(c), Some(k)) = (cache, &key) {
                c.append(k, &v)?;
            }
            (v, false)
        }
    };
    let report: T = serde_json::from_value(result.clone())?;
    let out = match cfg.format {
        Format::Json => {
            let env = Envelope {
                command: cmd,
                config: cfg,
                cached,
                result,
                timing: Timing {
                    elapsed_ms: start.elapsed().as_millis(),
                    timestamp: cache::now(),
                },
            };
            serde_json::to_string_pretty(&env)? + "\n"
        }
        Format::Csv => match report.csv() {
            Some(s) => s,
            None => anyhow::bail!("{cmd} has no CSV output; use --format json or text"),
        },
        Format::Text => report.text(),
    };
    print!("{out}");
    Ok(report.status())
}

fn dispatch(cli: Cli) -> Result<Status> {
    let cfg = RunConfig::from_args(&cli.global)?;
    let cache = cfg.cache_dir.as_deref().map(Cache::open).transpose()?;
    let cache = cache.as_ref();
    let name = cli.command.name();
    match &cli.command {
        Command::Hilbert(a) => run(name, &cfg, cache, Some(commands::hilbert_key(a)?), || {
            commands::hilbert(a, &cfg)
        }),
        // Sweeps cache per case instead.
        Command::Sweep(a) => run(name, &cfg, None, None, || commands::sweep(a, &cfg, cache)),
        Command::VerifyAh(a) => run(
            name,
            &cfg,
            cache,
            Some(format!("{}|{}|{:?}", a.n, a.d, a.k)),
            || commands::verify_ah(a, &cfg),
        ),
        Command::Certificate(a) => run(
            name,
            &cfg,
            cache,
            Some(commands::certificate_key(a)?),
            || commands::certificate(a, &cfg),
        ),
        Command::Witness(a) => run(name, &cfg, cache, Some(commands::witness_key(a)?), || {
            commands::witness(a, &cfg)
        }),
        Command::Sylvester(a) => run(name, &cfg, cache, Some(commands::sylvester_key(a)), || {
            commands::sylvester(a, &cfg)
        }),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(Status::Agrees) => ExitCode::SUCCESS,
        Ok(Status::Disagrees) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
