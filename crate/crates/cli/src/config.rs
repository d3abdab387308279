use std::path::PathBuf;

use ahlab_core::exactlinalg::{FieldConfig, DEFAULT_PRIME};
use ahlab_core::interpolation::Sampling;
use anyhow::{bail, Result};
use clap::{Args, ValueEnum};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldArg {
    /// Integers mod a prime (default 2^31 - 1).
    Prime,
    /// Exact rationals.
    Q,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug)]
pub struct GlobalArgs {
    /// Field for rank computations.
    #[arg(long, global = true, value_enum, default_value = "prime")]
    pub field: FieldArg,
    /// Prime modulus, below 2^32.
    #[arg(long, global = true)]
    pub prime: Option<u64>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Random trials per rank computation.
    #[arg(long, global = true, default_value_t = 3)]
    pub trials: usize,
    /// Root separation and residual tolerance for binary form decompositions.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    /// Directory of the JSON-lines report cache.
    #[arg(long, global = true, env = "AHLAB_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Worker threads for sweeps; defaults to the number of cores.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

/// Everything that determines a result, recorded in every output.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub field: FieldArg,
    pub prime: Option<u64>,
    pub seed: u64,
    pub trials: usize,
    pub tol: f64,
    #[serde(skip)]
    pub field_config: FieldConfig,
    #[serde(skip)]
    pub cache_dir: Option<PathBuf>,
    #[serde(skip)]
    pub format: Format,
    #[serde(skip)]
    pub jobs: Option<usize>,
}

impl RunConfig {
    pub fn from_args(g: &GlobalArgs) -> Result<Self> {
        let (field_config, prime) = match (g.field, g.prime) {
            (FieldArg::Q, Some(_)) => bail!("--prime only applies to --field prime"),
            (FieldArg::Q, None) => (FieldConfig::rationals(), None),
            (FieldArg::Prime, p) => {
                let p = p.unwrap_or(DEFAULT_PRIME);
                (FieldConfig::prime(p)?, Some(p))
            }
        };
        if g.trials == 0 {
            bail!("--trials must be at least 1");
        }
        if !g.tol.is_finite() || g.tol <= 0.0 {
            bail!("--tol must be positive");
        }
        Ok(RunConfig {
            field: g.field,
            prime,
            seed: g.seed,
            trials: g.trials,
            tol: g.tol,
            field_config,
            cache_dir: g.cache_dir.clone(),
            format: g.format,
            jobs: g.jobs,
        })
    }

    pub fn sampling(&self) -> Sampling {
        Sampling::new(self.field_config, self.seed).with_trials(self.trials)
    }

    /// Cache key prefix shared by all commands.
    pub fn key(&self) -> String {
        format!(
            "{:?}|{}|{}|{}|{:e}",
            self.field,
            self.prime.unwrap_or(0),
            self.seed,
            self.trials,
            self.tol
        )
    }
}
