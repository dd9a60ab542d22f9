//! Pipeline flags, the optional `key = value` config file, and how the two
//! combine. Flags win over the file; `MOCROP_SEED` counts as a flag.

use std::path::{Path, PathBuf};

use clap::Args;
use mocrop::search::SearchBackend;
use mocrop::{Epsilon, GridSpec, MoCrop, MoCropConfig};

use crate::error::{CliError, CliResult};

#[derive(Args, Debug, Clone, Default)]
pub struct ConfigArgs {
    /// Config file of `key = value` lines; keys match the long flag names.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Grid as ROWSxCOLS.
    #[arg(long, value_name = "RxC")]
    pub grid: Option<String>,
    /// Target crop area as a fraction of the frame.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Relative tolerance on the crop area.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Sampling budget N.
    #[arg(long, value_name = "N")]
    pub samples: Option<usize>,
    /// Sampling seed.
    #[arg(long, env = "MOCROP_SEED")]
    pub seed: Option<u64>,
    /// Absolute static-vector threshold in pixels.
    #[arg(long, conflicts_with = "epsilon_percentile")]
    pub epsilon: Option<f64>,
    /// Static-vector threshold as a percentile of the clip's magnitudes.
    #[arg(long, value_name = "Q")]
    pub epsilon_percentile: Option<f64>,
    #[arg(long, overrides_with = "no_dm")]
    pub dm: bool,
    /// Keep static vectors.
    #[arg(long)]
    pub no_dm: bool,
    #[arg(long, overrides_with = "no_mcs")]
    pub mcs: bool,
    /// Use every filtered vector instead of sampling.
    #[arg(long)]
    pub no_mcs: bool,
    /// Subtract the median motion vector before filtering.
    #[arg(long, overrides_with = "no_gmc")]
    pub gmc: bool,
    #[arg(long)]
    pub no_gmc: bool,
    #[arg(long, overrides_with = "no_flat_fallback")]
    pub flat_fallback: bool,
    /// Search even when the map is flat.
    #[arg(long)]
    pub no_flat_fallback: bool,
    /// Relative spread under which a map counts as flat.
    #[arg(long)]
    pub flatness: Option<f64>,
    /// Search backend: naive, integral or sliding.
    #[arg(long)]
    pub backend: Option<String>,
}

fn toggle(on: bool, off: bool) -> Option<bool> {
    match (on, off) {
        (true, _) => Some(true),
        (_, true) => Some(false),
        _ => None,
    }
}

fn parse_backend(s: &str) -> CliResult<SearchBackend> {
    s.parse().map_err(CliError::validation)
}

fn parse_grid(s: &str) -> CliResult<GridSpec> {
    Ok(s.parse::<GridSpec>()?)
}

fn parse_value<T: std::str::FromStr>(path: &Path, line: usize, key: &str, value: &str) -> CliResult<T> {
    value
        .parse()
        .map_err(|_| CliError::input(format!("{}:{line}: invalid value {value:?} for {key}", path.display())))
}

/// Applies a config file on top of `cfg`.
pub fn apply_file(cfg: &mut MoCropConfig, backend: &mut SearchBackend, path: &Path) -> CliResult<()> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::cannot_open(path, e))?;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let n = i + 1;
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::input(format!("{}:{n}: expected key = value", path.display())))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        match key.as_str() {
            "grid" => cfg.grid = parse_grid(value)?,
            "alpha" => cfg.alpha = parse_value(path, n, &key, value)?,
            "delta" => cfg.delta = parse_value(path, n, &key, value)?,
            "samples" => cfg.sample_budget = parse_value(path, n, &key, value)?,
            "seed" => cfg.seed = parse_value(path, n, &key, value)?,
            "epsilon" => cfg.epsilon = Epsilon::Absolute(parse_value(path, n, &key, value)?),
            "epsilon-percentile" => cfg.epsilon = Epsilon::Percentile(parse_value(path, n, &key, value)?),
            "dm" => cfg.enable_dm = parse_value(path, n, &key, value)?,
            "mcs" => cfg.enable_mcs = parse_value(path, n, &key, value)?,
            "gmc" => cfg.enable_gmc = parse_value(path, n, &key, value)?,
            "flat-fallback" => cfg.flat_fallback = parse_value(path, n, &key, value)?,
            "flatness" => cfg.flatness_threshold = parse_value(path, n, &key, value)?,
            "backend" => *backend = parse_backend(value)?,
            _ => return Err(CliError::input(format!("{}:{n}: unknown key {key:?}", path.display()))),
        }
    }
    Ok(())
}

impl ConfigArgs {
    /// Defaults, then the config file, then flags.
    pub fn resolve(&self) -> CliResult<(MoCropConfig, SearchBackend)> {
        let mut cfg = MoCropConfig::default();
        let mut backend = SearchBackend::Integral;
        if let Some(path) = &self.config {
            apply_file(&mut cfg, &mut backend, path)?;
        }
        if let Some(g) = &self.grid {
            cfg.grid = parse_grid(g)?;
        }
        if let Some(b) = &self.backend {
            backend = parse_backend(b)?;
        }
        cfg.alpha = self.alpha.unwrap_or(cfg.alpha);
        cfg.delta = self.delta.unwrap_or(cfg.delta);
        cfg.sample_budget = self.samples.unwrap_or(cfg.sample_budget);
        cfg.seed = self.seed.unwrap_or(cfg.seed);
        if let Some(e) = self.epsilon {
            cfg.epsilon = Epsilon::Absolute(e);
        }
        if let Some(q) = self.epsilon_percentile {
            cfg.epsilon = Epsilon::Percentile(q);
        }
        cfg.enable_dm = toggle(self.dm, self.no_dm).unwrap_or(cfg.enable_dm);
        cfg.enable_mcs = toggle(self.mcs, self.no_mcs).unwrap_or(cfg.enable_mcs);
        cfg.enable_gmc = toggle(self.gmc, self.no_gmc).unwrap_or(cfg.enable_gmc);
        cfg.flat_fallback = toggle(self.flat_fallback, self.no_flat_fallback).unwrap_or(cfg.flat_fallback);
        cfg.flatness_threshold = self.flatness.unwrap_or(cfg.flatness_threshold);
        Ok((cfg, backend))
    }

    pub fn build(&self) -> CliResult<MoCrop> {
        let (cfg, backend) = self.resolve()?;
        Ok(MoCrop::new(cfg)?.with_backend(backend))
    }
}
