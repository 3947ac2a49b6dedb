//! Rayon drivers for the ensemble computations.
//!
//! Members are evaluated in parallel and collected in index order before the
//! core reducers run, so results are bitwise identical for any thread count.

use anyhow::{Context, Result};
use echo_core::analysis::{FidelitySeries, SemiclassicalColumns};
use echo_core::qmap::{Echo, Ensemble};
use echo_core::semiclassics::{member_amplitudes_multi, reduce_amplitudes, SemiclassicalConfig};
use echo_core::{Complex64, MapParams};
use rayon::prelude::*;

use crate::fft::RustFft;

/// Exact ensemble-averaged fidelity.
pub fn exact_series(
    params: &MapParams,
    ensemble: &Ensemble,
    steps: usize,
) -> Result<FidelitySeries> {
    let echo = Echo::new(params)?;
    let plan = RustFft::new(params.dim());
    let members: Vec<Vec<f64>> = (0..ensemble.count)
        .into_par_iter()
        .map_init(
            || plan.clone(),
            |fft, i| echo.member_trace(ensemble, i, steps, fft),
        )
        .collect::<Result<_, _>>()?;
    FidelitySeries::from_exact_members(*params, ensemble, &members).context("averaging members")
}

/// Semiclassical parts for several perturbations of one map, sharing the orbits.
///
/// Returns one set of columns per entry of `params`.
pub fn semiclassical_series(
    params: &[MapParams],
    config: &SemiclassicalConfig,
) -> Result<Vec<SemiclassicalColumns>> {
    let kick = params.first().context("no perturbations")?.kick();
    let members: Vec<Vec<Vec<Complex64>>> = (0..config.ensemble.count)
        .into_par_iter()
        .map(|i| member_amplitudes_multi(config, i, kick, params))
        .collect::<Result<_, _>>()?;
    (0..params.len())
        .map(|k| {
            let per_sigma: Vec<&[Complex64]> = members.iter().map(|m| m[k].as_slice()).collect();
            Ok(reduce_amplitudes(&per_sigma, config)?)
        })
        .collect()
}

/// Runs `f` on a pool of `threads` workers (`None` means all cores).
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n.max(1));
    }
    let pool = builder.build().context("building the worker pool")?;
    Ok(pool.install(f))
}
