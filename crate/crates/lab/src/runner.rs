//! Executes an [`ExperimentConfig`] and writes its tables, plots and manifest.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use echo_core::analysis::{fgr_rate, fit_decay_rate, DecayFit, FidelitySeries, Window};
use echo_core::cmap::{lyapunov_analytic, sample_action_distribution, Binning};
use echo_core::qmap::{Ensemble, InitialState};
use echo_core::semiclassics::SemiclassicalConfig;
use echo_core::MapParams;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::{ActionTask, ExperimentConfig, FidelityTask, Format, RateTask};
use crate::output::{
    fidelity_table, histogram_table, rate_table, write_file, RatePoint, SCHEMA_VERSION,
};
use crate::{parallel, plot};

/// Diffusion constant behind the reference golden-rule line, `π⁴/90`.
pub const REFERENCE_DIFFUSION: f64 = 1.082_323_233_711_138_2;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub out: PathBuf,
    /// Manifest path; `<out>/manifest.json` when absent.
    pub manifest: Option<PathBuf>,
    /// Worker cap; all cores when absent.
    pub threads: Option<usize>,
    /// Preset the config came from, for the record.
    pub preset: Option<String>,
    pub quiet: bool,
}

/// Everything needed to reproduce a run, plus what it produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub core_version: String,
    pub schema_version: u32,
    pub preset: Option<String>,
    pub seed: u64,
    pub threads: Option<usize>,
    pub wall_seconds: f64,
    /// The config as requested, before `scale` was applied.
    pub requested: ExperimentConfig,
    /// The config actually run; replaying it reproduces every table.
    pub config: ExperimentConfig,
    pub outputs: Vec<OutputRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub label: String,
    pub kind: String,
    pub files: Vec<String>,
    pub details: Value,
}

pub fn run(requested: &ExperimentConfig, opts: &RunOptions) -> Result<Manifest> {
    let start = Instant::now();
    let config = requested.scaled()?;
    std::fs::create_dir_all(&opts.out)
        .with_context(|| format!("creating output directory {}", opts.out.display()))?;
    let outputs =
        parallel::with_threads(opts.threads, || execute(&config, &opts.out, opts.quiet))??;
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        core_version: echo_core::VERSION.into(),
        schema_version: SCHEMA_VERSION,
        preset: opts.preset.clone(),
        seed: config.seed,
        threads: opts.threads,
        wall_seconds: start.elapsed().as_secs_f64(),
        requested: requested.clone(),
        config,
        outputs,
    };
    let path = opts
        .manifest
        .clone()
        .unwrap_or_else(|| opts.out.join(MANIFEST_FILE));
    let mut bytes = serde_json::to_vec_pretty(&manifest)?;
    bytes.push(b'\n');
    write_file(&path, &bytes)?;
    Ok(manifest)
}

fn execute(config: &ExperimentConfig, out: &Path, quiet: bool) -> Result<Vec<OutputRecord>> {
    let formats = if config.formats.is_empty() {
        vec![Format::Csv]
    } else {
        config.formats.clone()
    };
    let ctx = Ctx {
        out,
        formats: &formats,
        seed: config.seed,
        plot: config.plot,
        quiet,
    };
    let mut records = Vec::new();
    for t in &config.fidelity {
        records.push(ctx.fidelity(t)?);
    }
    for t in &config.rates {
        records.push(ctx.rates(t)?);
    }
    for t in &config.actions {
        records.push(ctx.actions(t)?);
    }
    Ok(records)
}

struct Ctx<'a> {
    out: &'a Path,
    formats: &'a [Format],
    seed: u64,
    plot: bool,
    quiet: bool,
}

impl Ctx<'_> {
    fn log(&self, msg: std::fmt::Arguments<'_>) {
        if !self.quiet {
            eprintln!("{msg}");
        }
    }

    fn files(&self, paths: Vec<PathBuf>) -> Vec<String> {
        paths
            .iter()
            .map(|p| {
                p.strip_prefix(self.out)
                    .unwrap_or(p)
                    .to_string_lossy()
                    .into_owned()
            })
            .collect()
    }

    fn fidelity(&self, task: &FidelityTask) -> Result<OutputRecord> {
        let params = task.perturbation.params(task.kick, task.dim)?;
        self.log(format_args!(
            "{}: K0={} sigma={:.4} N={} steps={}",
            task.label,
            params.kick(),
            params.sigma(),
            params.dim(),
            task.steps
        ));
        let mut series = match &task.exact {
            Some(e) => {
                let ensemble = Ensemble::new(e.initial.into(), e.members, self.seed)?;
                parallel::exact_series(&params, &ensemble, task.steps)?
            }
            None => FidelitySeries::new(params, task.steps),
        };
        if let Some(s) = &task.semiclassical {
            let sc = SemiclassicalConfig::new(s.p0_grid, s.members, self.seed, task.steps)?;
            let columns = parallel::semiclassical_series(&[params], &sc)?
                .pop()
                .context("semiclassical run returned nothing")?;
            series = series.with_semiclassical(columns)?;
        }
        let table = fidelity_table(&series);
        let mut files = table.write(self.out, &task.label, self.formats)?;
        if self.plot {
            files.push(plot::fidelity(self.out, &task.label, &table)?);
        }

        let mut details = json!({
            "params": params_json(&params),
            "steps": task.steps,
            "wrap_warning": series.wrap_warning,
        });
        if let Some(info) = &series.ensemble {
            details["exact"] = json!({
                "initial": initial_name(info.initial),
                "members": info.count,
                "seed": info.seed,
            });
        }
        if let Some(sc) = &series.semiclassical {
            details["semiclassical"] = json!({
                "p0_grid": sc.p0_grid,
                "members": sc.ensemble.count,
                "seed": sc.ensemble.seed,
            });
        }
        if task.fit {
            if let Some(col) = &series.exact {
                let fit = fit_decay_rate(&col.values, &Window::auto(params.dim()));
                details["fit"] = fit_json(fit.as_ref().map_err(ToString::to_string));
            }
        }
        Ok(OutputRecord {
            label: task.label.clone(),
            kind: "fidelity".into(),
            files: self.files(files),
            details,
        })
    }

    fn rates(&self, task: &RateTask) -> Result<OutputRecord> {
        let lyapunov = lyapunov_analytic(task.kick)?;
        let ensemble = Ensemble::new(task.initial.into(), task.members, self.seed)?;
        let mut points = Vec::new();
        let mut windows = Vec::new();
        for sigma in task.sigmas.values() {
            let params = MapParams::from_sigma(task.kick, sigma, task.dim)?;
            let steps = rate_steps(sigma, lyapunov, task.max_steps);
            self.log(format_args!(
                "{}: K0={} sigma={sigma:.4} N={} steps={steps}",
                task.label, task.kick, task.dim
            ));
            let series = parallel::exact_series(&params, &ensemble, steps)?;
            let col = series.exact.as_ref().context("exact column missing")?;
            let fit = fit_decay_rate(&col.values, &Window::auto(task.dim));
            windows.push(json!({
                "sigma": sigma,
                "steps": steps,
                "wrap_warning": series.wrap_warning,
                "fit": fit_json(fit.as_ref().map_err(ToString::to_string)),
            }));
            points.push(RatePoint {
                sigma,
                epsilon: params.epsilon(),
                steps,
                fit: fit.ok(),
                fgr: fgr_rate(sigma, REFERENCE_DIFFUSION),
                lyapunov,
            });
        }
        let table = rate_table(&points);
        let mut files = table.write(self.out, &task.label, self.formats)?;
        if self.plot {
            files.push(plot::rates(self.out, &task.label, &table)?);
        }
        Ok(OutputRecord {
            label: task.label.clone(),
            kind: "rates".into(),
            files: self.files(files),
            details: json!({
                "kick": task.kick,
                "dim": task.dim,
                "initial": initial_name(task.initial.into()),
                "members": task.members,
                "seed": self.seed,
                "lyapunov": lyapunov,
                "reference_diffusion": REFERENCE_DIFFUSION,
                "points": windows,
            }),
        })
    }

    fn actions(&self, task: &ActionTask) -> Result<OutputRecord> {
        self.log(format_args!(
            "{}: K0={} t={} samples={}",
            task.label, task.kick, task.steps, task.samples
        ));
        let binning = task.bins.map_or(Binning::FreedmanDiaconis, Binning::Count);
        let hist =
            sample_action_distribution(task.kick, task.steps, task.samples, self.seed, binning)?;
        let g = echo_core::analysis::gaussianity_metrics(&hist)?;
        let table = histogram_table(&hist);
        let mut files = table.write(self.out, &task.label, self.formats)?;
        if self.plot {
            files.push(plot::histogram(
                self.out,
                &task.label,
                &table,
                hist.variance,
            )?);
        }
        Ok(OutputRecord {
            label: task.label.clone(),
            kind: "actions".into(),
            files: self.files(files),
            details: json!({
                "kick": task.kick,
                "t": task.steps,
                "samples": task.samples,
                "seed": self.seed,
                "center": hist.center,
                "mean": hist.mean,
                "variance": hist.variance,
                "excess_kurtosis": hist.excess_kurtosis,
                "kurtosis_std_error": g.kurtosis_std_error,
                "sup_distance": g.sup_distance,
                "bins": hist.bins(),
                "clipped": hist.clipped,
            }),
        })
    }
}

/// Steps for one point of a rate sweep: about six e-foldings of the expected
/// decay, between 20 and `max_steps`.
pub fn rate_steps(sigma: f64, lyapunov: f64, max_steps: usize) -> usize {
    let guess = fgr_rate(sigma, REFERENCE_DIFFUSION).min(lyapunov);
    ((6.0 / guess).ceil() as usize).clamp(20.min(max_steps), max_steps)
}

fn initial_name(i: InitialState) -> &'static str {
    match i {
        InitialState::PointSource => "point-source",
        InitialState::Gaussian => "gaussian",
    }
}

fn params_json(p: &MapParams) -> Value {
    json!({
        "kick": p.kick(),
        "sigma": p.sigma(),
        "epsilon": p.epsilon(),
        "dim": p.dim(),
        "hbar": p.hbar(),
        "k0": p.k0(),
    })
}

fn fit_json(fit: Result<&DecayFit, String>) -> Value {
    match fit {
        Ok(f) => json!({
            "gamma": f.gamma,
            "intercept": f.intercept,
            "t_lo": f.t_lo,
            "t_hi": f.t_hi,
            "points": f.points,
            "residual_rms": f.residual_rms,
            "r_squared": f.r_squared,
            "floor": f.floor,
            "ceiling": f.ceiling,
        }),
        Err(e) => json!({ "error": e }),
    }
}
