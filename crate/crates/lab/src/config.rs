//! Experiment configuration: what to compute, at which parameters, with which seed.
//!
//! A config is plain data. Together with its seed it fully determines every
//! output file; nothing is drawn from ambient randomness.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, ensure, Context, Result};
use echo_core::analysis::MIN_GAUSSIANITY_SAMPLES;
use echo_core::qmap::InitialState;
use echo_core::MapParams;
use serde::{Deserialize, Serialize};

pub const DEFAULT_SEED: u64 = 42;

/// Smallest Hilbert-space dimension `--scale` will shrink to.
pub const MIN_SCALED_DIM: usize = 64;
/// Smallest ensemble `--scale` will shrink to.
pub const MIN_SCALED_MEMBERS: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Desk-scale factor in (0, 1]; 1 keeps every size as written.
    #[serde(default = "one")]
    pub scale: f64,
    #[serde(default)]
    pub formats: Vec<Format>,
    #[serde(default)]
    pub plot: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fidelity: Vec<FidelityTask>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rates: Vec<RateTask>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub actions: Vec<ActionTask>,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

fn one() -> f64 {
    1.0
}

/// Perturbation strength, given either directly as `σ` or as the classical `ε`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Perturbation {
    Sigma(f64),
    Epsilon(f64),
}

impl Perturbation {
    pub fn params(&self, kick: f64, dim: usize) -> Result<MapParams> {
        Ok(match *self {
            Perturbation::Sigma(s) => MapParams::from_sigma(kick, s, dim)?,
            Perturbation::Epsilon(e) => MapParams::new(kick, e, dim)?,
        })
    }
}

/// Averaged fidelity for one `(K₀, σ, N)` cell, exact and/or semiclassical.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FidelityTask {
    pub label: String,
    pub kick: f64,
    pub dim: usize,
    pub perturbation: Perturbation,
    pub steps: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<ExactSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub semiclassical: Option<SemiclassicalSpec>,
    /// Fit an exponential rate to the exact column.
    #[serde(default)]
    pub fit: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExactSpec {
    pub initial: Initial,
    pub members: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemiclassicalSpec {
    pub p0_grid: usize,
    pub members: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Initial {
    PointSource,
    Gaussian,
}

impl From<Initial> for InitialState {
    fn from(i: Initial) -> Self {
        match i {
            Initial::PointSource => InitialState::PointSource,
            Initial::Gaussian => InitialState::Gaussian,
        }
    }
}

/// Fitted decay rate as a function of `σ` for one `K₀`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateTask {
    pub label: String,
    pub kick: f64,
    pub dim: usize,
    pub sigmas: SigmaGrid,
    pub initial: Initial,
    pub members: usize,
    /// Cap on steps per `σ`; the actual count adapts to the expected rate.
    pub max_steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SigmaGrid {
    List(Vec<f64>),
    Log { from: f64, to: f64, count: usize },
}

impl SigmaGrid {
    pub fn values(&self) -> Vec<f64> {
        match self {
            SigmaGrid::List(v) => v.clone(),
            SigmaGrid::Log { from, to, count } => match *count {
                0 => Vec::new(),
                1 => vec![*from],
                n => {
                    let (a, b) = (from.ln(), to.ln());
                    (0..n)
                        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
                        .collect()
                }
            },
        }
    }
}

/// Histogram of first-order action differences at a fixed time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionTask {
    pub label: String,
    pub kick: f64,
    pub steps: usize,
    pub samples: usize,
    /// Fixed bin count; Freedman–Diaconis when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bins: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => bail!("unknown output format `{other}` (expected csv or json)"),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

impl ExperimentConfig {
    pub fn empty(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            seed: DEFAULT_SEED,
            scale: 1.0,
            formats: vec![Format::Csv],
            plot: false,
            fidelity: Vec::new(),
            rates: Vec::new(),
            actions: Vec::new(),
        }
    }

    /// Reads a TOML config, or the `config` entry of a JSON run manifest.
    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let is_json = path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("json"));
        let config: Self = if is_json {
            let mut value: serde_json::Value = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", path.display()))?;
            let inner = value.get_mut("config").map(serde_json::Value::take);
            serde_json::from_value(inner.unwrap_or(value))
                .with_context(|| format!("reading the config in {}", path.display()))?
        } else {
            toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
        };
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(
            self.scale > 0.0 && self.scale <= 1.0,
            "scale must lie in (0, 1], got {}",
            self.scale
        );
        let mut labels = std::collections::HashSet::new();
        let all = self
            .fidelity
            .iter()
            .map(|t| &t.label)
            .chain(self.rates.iter().map(|t| &t.label))
            .chain(self.actions.iter().map(|t| &t.label));
        for label in all {
            ensure!(
                !label.is_empty()
                    && label
                        .chars()
                        .all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c)),
                "label `{label}` must be a non-empty file-name-safe string"
            );
            ensure!(labels.insert(label), "duplicate label `{label}`");
        }
        for t in &self.fidelity {
            t.perturbation.params(t.kick, t.dim)?;
            ensure!(
                t.exact.is_some() || t.semiclassical.is_some(),
                "fidelity task `{}` computes nothing: give `exact` and/or `semiclassical`",
                t.label
            );
            if let Some(e) = &t.exact {
                ensure!(e.members > 0, "`{}`: exact ensemble is empty", t.label);
            }
            if let Some(s) = &t.semiclassical {
                ensure!(
                    s.members > 0 && s.p0_grid > 0,
                    "`{}`: semiclassical ensemble or grid is empty",
                    t.label
                );
            }
        }
        for t in &self.rates {
            MapParams::from_sigma(t.kick, 0.0, t.dim)?;
            ensure!(t.members > 0, "`{}`: ensemble is empty", t.label);
            ensure!(
                t.max_steps >= 4,
                "`{}`: max_steps must be at least 4",
                t.label
            );
            ensure!(
                t.sigmas.values().iter().all(|s| s.is_finite() && *s > 0.0),
                "`{}`: sigmas must be positive",
                t.label
            );
        }
        for t in &self.actions {
            ensure!(
                t.samples >= MIN_GAUSSIANITY_SAMPLES,
                "`{}`: at least {MIN_GAUSSIANITY_SAMPLES} samples are needed",
                t.label
            );
        }
        Ok(())
    }

    /// Applies `self.scale`, returning a config with scale 1.
    ///
    /// Dimensions drop to the largest power of two not above `N·scale`, and
    /// ensembles, σ-grid densities and sample counts shrink by the same factor.
    /// `σ` is held fixed, so an `ε` given for the original `N` is converted.
    pub fn scaled(&self) -> Result<Self> {
        self.validate()?;
        let f = self.scale;
        let mut out = self.clone();
        out.scale = 1.0;
        if f == 1.0 {
            return Ok(out);
        }
        for t in &mut out.fidelity {
            let sigma = t.perturbation.params(t.kick, t.dim)?.sigma();
            t.perturbation = Perturbation::Sigma(sigma);
            t.dim = scale_dim(t.dim, f);
            if let Some(e) = &mut t.exact {
                e.members = scale_count(e.members, f, MIN_SCALED_MEMBERS);
            }
            if let Some(s) = &mut t.semiclassical {
                s.members = scale_count(s.members, f, MIN_SCALED_MEMBERS);
            }
        }
        for t in &mut out.rates {
            t.dim = scale_dim(t.dim, f);
            t.members = scale_count(t.members, f, MIN_SCALED_MEMBERS);
            if let SigmaGrid::Log { count, .. } = &mut t.sigmas {
                *count = scale_count(*count, f, 4.min(*count));
            }
        }
        for t in &mut out.actions {
            t.samples = scale_count(t.samples, f, MIN_GAUSSIANITY_SAMPLES);
        }
        Ok(out)
    }
}

fn scale_dim(dim: usize, f: f64) -> usize {
    let target = (dim as f64 * f).floor() as usize;
    let pow = if target < 1 {
        1
    } else {
        1usize << (usize::BITS - 1 - target.leading_zeros())
    };
    pow.max(MIN_SCALED_DIM).min(dim)
}

fn scale_count(n: usize, f: f64, min: usize) -> usize {
    ((n as f64 * f).ceil() as usize).max(min).min(n)
}
