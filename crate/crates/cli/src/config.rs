//! Run configuration: flags, then the `--config` file, then defaults.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::Args;
use serde::{Deserialize, Serialize};

use cutcat::experiments::{log_spaced, McConfig};

/// Seed used when neither a flag nor a config file gives one.
pub const DEFAULT_SEED: u64 = 0x5EED_0C47;

pub const OUT_DIR_ENV: &str = "CUTCAT_OUT_DIR";

/// Monte-Carlo knobs shared by both sweep subcommands.
#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepArgs {
    /// Comma-separated physical error rates.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub p: Option<Vec<f64>>,
    /// Log-spaced sweep `LO:HI:N`; ignored when `--p` is given.
    #[arg(long)]
    pub sweep: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub min_failures: Option<u64>,
    #[arg(long)]
    pub max_trials: Option<u64>,
    /// Base name of the CSV and manifest files.
    #[arg(long)]
    pub name: Option<String>,
    /// Output directory; defaults to $CUTCAT_OUT_DIR, then `results`.
    #[arg(long)]
    #[serde(skip)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub ps: Vec<f64>,
    pub seed: u64,
    pub mc: McConfig,
    pub name: String,
}

fn parse_sweep(s: &str) -> anyhow::Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, n] = parts[..] else { bail!("--sweep expects LO:HI:N, got {s:?}") };
    let (lo, hi): (f64, f64) = (lo.parse()?, hi.parse()?);
    let n: usize = n.parse()?;
    if !(lo > 0.0 && hi >= lo && n > 0) {
        bail!("--sweep needs 0 < LO <= HI and N > 0");
    }
    Ok(log_spaced(lo, hi, n))
}

impl SweepArgs {
    pub fn overlay(self, file: SweepArgs) -> SweepArgs {
        SweepArgs {
            p: self.p.or(file.p),
            sweep: self.sweep.or(file.sweep),
            seed: self.seed.or(file.seed),
            min_failures: self.min_failures.or(file.min_failures),
            max_trials: self.max_trials.or(file.max_trials),
            name: self.name.or(file.name),
            out_dir: self.out_dir.or(file.out_dir),
        }
    }

    pub fn resolve(&self, default_name: String) -> anyhow::Result<Sweep> {
        let ps = match (&self.p, &self.sweep) {
            (Some(ps), _) => ps.clone(),
            (None, Some(s)) => parse_sweep(s)?,
            (None, None) => bail!("give --p or --sweep"),
        };
        if ps.is_empty() || ps.iter().any(|p| !(0.0..=1.0).contains(p)) {
            bail!("error rates must lie in [0, 1]");
        }
        let defaults = McConfig::default();
        let mc = McConfig {
            min_failures: self.min_failures.unwrap_or(defaults.min_failures),
            max_trials: self.max_trials.unwrap_or(defaults.max_trials),
            ..defaults
        };
        if mc.min_failures == 0 {
            bail!("--min-failures must be at least 1");
        }
        let name = self.name.clone().unwrap_or(default_name);
        if name.is_empty() || name.contains(['/', '\\']) {
            bail!("--name must be a plain file stem");
        }
        Ok(Sweep { ps, seed: self.seed.unwrap_or(DEFAULT_SEED), mc, name })
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out_dir
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("results"))
    }
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct GadgetArgs {
    #[arg(long)]
    pub gamma: Option<usize>,
    #[arg(long)]
    pub distance: Option<usize>,
    /// Fixed cut-cat rounds instead of the distance's default.
    #[arg(long)]
    pub rounds: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub sweep: SweepArgs,
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct BlockArgs {
    /// Code file, or `steane` for the built-in [[7,1,3]] code.
    #[arg(long)]
    pub code: Option<String>,
    /// Data error rate over gadget error rate.
    #[arg(long)]
    pub ratio: Option<f64>,
    /// Generators at least this heavy use the cut-cat gadget.
    #[arg(long)]
    pub cut_cat_min_weight: Option<usize>,
    #[arg(long)]
    pub max_rounds: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub sweep: SweepArgs,
}

/// On-disk manifest: the command and its fully resolved options.
#[derive(Debug, Serialize, Deserialize)]
pub struct Manifest<T> {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: T,
    pub csv: String,
}

impl<T: Serialize> Manifest<T> {
    pub fn new(command: &str, config: T, csv: String) -> Self {
        Self { tool: "cutcat".into(), version: env!("CARGO_PKG_VERSION").into(), command: command.into(), config, csv }
    }
}

/// Reads `config` out of a manifest, or takes the whole file as the config.
pub fn load_config<T: for<'de> Deserialize<'de>>(path: &Path, command: &str) -> anyhow::Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if let Some(c) = value.get("command").and_then(|c| c.as_str()) {
        if c != command {
            bail!("{} is a manifest for `{c}`, not `{command}`", path.display());
        }
    }
    let inner = value.get("config").cloned().unwrap_or(value);
    Ok(serde_json::from_value(inner)?)
}
