//! Fidelity from classical actions alone.
//!
//! For a point source at `θ0` the fidelity amplitude is the average over
//! initial momenta of `exp(iσ ΔS/ε)`, where `ΔS/ε` is the first-order action
//! difference along the unperturbed orbit from `(θ0, p0)`. The momentum
//! integral is a uniform grid `p0_j = 2πj/G`, so averaging the amplitude over
//! an ensemble of `θ0` is the same as evaluating the empirical characteristic
//! function of all pooled actions.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::analysis::{Column, SemiclassicalColumns};
use crate::cmap::{step_with_action, PhasePoint};
use crate::error::{finite, Error, Result};
use crate::params::MapParams;
use crate::qmap::Ensemble;

/// Initial-momentum grid size used when none is given.
pub const DEFAULT_P0_GRID: usize = 16_384;
/// Number of point sources used when none is given.
pub const DEFAULT_MEMBERS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemiclassicalConfig {
    /// Number of initial momenta, uniformly covering `[0, 2π)`.
    pub p0_grid: usize,
    /// Point sources; the same seed as an exact run gives the same `θ0`.
    pub ensemble: Ensemble,
    pub steps: usize,
}

impl SemiclassicalConfig {
    pub fn new(p0_grid: usize, members: usize, seed: u64, steps: usize) -> Result<Self> {
        if p0_grid == 0 {
            return Err(Error::Input("the initial-momentum grid is empty"));
        }
        Ok(Self {
            p0_grid,
            ensemble: Ensemble::point_sources(members, seed)?,
            steps,
        })
    }

    pub fn with_defaults(seed: u64, steps: usize) -> Result<Self> {
        Self::new(DEFAULT_P0_GRID, DEFAULT_MEMBERS, seed, steps)
    }
}

/// `m(θ0, t)` for `t = 0..=steps` and each entry of `sigmas`, sharing the orbits.
///
/// Returns one trace per `sigma`, in the order given.
pub fn amplitude_traces(
    theta0: f64,
    kick: f64,
    sigmas: &[f64],
    p0_grid: usize,
    steps: usize,
) -> Result<Vec<Vec<Complex64>>> {
    finite("theta0", theta0)?;
    if p0_grid == 0 {
        return Err(Error::Input("the initial-momentum grid is empty"));
    }
    for &s in sigmas {
        finite("sigma", s)?;
    }
    let zero = Complex64::new(0.0, 0.0);
    let mut sums = vec![vec![zero; steps + 1]; sigmas.len()];
    let dp = core::f64::consts::TAU / p0_grid as f64;
    for j in 0..p0_grid {
        let mut x = PhasePoint::new(theta0, dp * j as f64);
        for t in 1..=steps {
            x = step_with_action(x, kick);
            for (acc, &sigma) in sums.iter_mut().zip(sigmas) {
                let (s, c) = libm::sincos(sigma * x.action);
                acc[t] += Complex64::new(c, s);
            }
        }
    }
    let inv = 1.0 / p0_grid as f64;
    for trace in &mut sums {
        trace[0] = Complex64::new(1.0, 0.0);
        for z in &mut trace[1..] {
            *z *= inv;
        }
    }
    Ok(sums)
}

/// `m(θ0, t)` at a single time.
pub fn m_semiclassical(
    theta0: f64,
    params: &MapParams,
    t: usize,
    config: &SemiclassicalConfig,
) -> Result<Complex64> {
    let traces = amplitude_traces(theta0, params.kick(), &[params.sigma()], config.p0_grid, t)?;
    Ok(traces[0][t])
}

/// Amplitude trace of ensemble member `index` (its grid-snapped `θ0`).
pub fn member_amplitudes(
    config: &SemiclassicalConfig,
    index: usize,
    params: &MapParams,
) -> Result<Vec<Complex64>> {
    member_amplitudes_multi(config, index, params.kick(), &[*params]).map(|mut v| v.remove(0))
}

/// Amplitude traces of one member for several perturbations of the same map.
///
/// All `params` must share `K0` and `N`.
pub fn member_amplitudes_multi(
    config: &SemiclassicalConfig,
    index: usize,
    kick: f64,
    params: &[MapParams],
) -> Result<Vec<Vec<Complex64>>> {
    let first = params
        .first()
        .ok_or(Error::Input("no perturbations given"))?;
    if params
        .iter()
        .any(|p| p.kick() != kick || p.dim() != first.dim())
    {
        return Err(Error::Input("perturbations must share K0 and N"));
    }
    let theta0 = config.ensemble.member_theta(index, first)?;
    let sigmas: Vec<f64> = params.iter().map(|p| p.sigma()).collect();
    amplitude_traces(theta0, kick, &sigmas, config.p0_grid, config.steps)
}

/// Mean-value, full and fluctuating parts from member traces in member order.
pub fn reduce_amplitudes<S: AsRef<[Complex64]>>(
    members: &[S],
    config: &SemiclassicalConfig,
) -> Result<SemiclassicalColumns> {
    let n = members.len();
    if n == 0 {
        return Err(Error::Input("no members to reduce"));
    }
    let len = members[0].as_ref().len();
    if members.iter().any(|m| m.as_ref().len() != len) {
        return Err(Error::Input("member traces differ in length"));
    }
    let nf = n as f64;
    let zero = Complex64::new(0.0, 0.0);
    let mut mean = vec![zero; len];
    let mut full = vec![0.0; len];
    for m in members {
        for ((acc, sq), &z) in mean.iter_mut().zip(full.iter_mut()).zip(m.as_ref()) {
            *acc += z;
            *sq += z.norm_sqr();
        }
    }
    for z in &mut mean {
        *z /= nf;
    }
    for v in &mut full {
        *v /= nf;
    }
    let ma: Vec<f64> = mean.iter().map(|z| z.norm_sqr()).collect();
    let mf: Vec<f64> = full.iter().zip(&ma).map(|(s, a)| s - a).collect();

    // spread of |m|² and of |m - m̄|² over members
    let mut var_full = vec![0.0; len];
    let mut dev = vec![0.0; len];
    let mut var_dev = vec![0.0; len];
    for m in members {
        for (t, &z) in m.as_ref().iter().enumerate() {
            let d = z.norm_sqr() - full[t];
            var_full[t] += d * d;
            dev[t] += (z - mean[t]).norm_sqr();
        }
    }
    let dev_mean: Vec<f64> = dev.iter().map(|d| d / nf).collect();
    for m in members {
        for (t, &z) in m.as_ref().iter().enumerate() {
            let d = (z - mean[t]).norm_sqr() - dev_mean[t];
            var_dev[t] += d * d;
        }
    }
    let se = |ss: f64| {
        if n > 1 {
            libm::sqrt(ss / (nf * (nf - 1.0)))
        } else {
            0.0
        }
    };
    let full_err: Vec<f64> = var_full.iter().map(|&v| se(v)).collect();
    let mf_err: Vec<f64> = var_dev.iter().map(|&v| se(v)).collect();
    let ma_err: Vec<f64> = dev
        .iter()
        .zip(&ma)
        .map(|(&d, &a)| {
            // delta method on |m̄|² with the standard error of m̄
            let s = if n > 1 {
                libm::sqrt(d / (nf * (nf - 1.0)))
            } else {
                0.0
            };
            2.0 * libm::sqrt(a) * s + s * s
        })
        .collect();

    Ok(SemiclassicalColumns {
        mean_part: Column::new(ma, ma_err),
        full: Column::new(full, full_err),
        fluctuating: Column::new(mf, mf_err),
        ensemble: config.ensemble.info(),
        p0_grid: config.p0_grid,
    })
}

/// `M̄_a`, `M̄_sc` and `M̄_f` over `t = 0..=config.steps`, members in index order.
pub fn semiclassical_series(
    params: &MapParams,
    config: &SemiclassicalConfig,
) -> Result<SemiclassicalColumns> {
    let members = (0..config.ensemble.count)
        .map(|i| member_amplitudes(config, i, params))
        .collect::<Result<Vec<_>>>()?;
    reduce_amplitudes(&members, config)
}

fn at_time(
    params: &MapParams,
    t: usize,
    config: &SemiclassicalConfig,
) -> Result<SemiclassicalColumns> {
    semiclassical_series(
        params,
        &SemiclassicalConfig {
            steps: t,
            ..*config
        },
    )
}

/// Mean-value part `M̄_a(t) = |mean over θ0 of m(θ0, t)|²`.
pub fn mean_part_ma(params: &MapParams, t: usize, config: &SemiclassicalConfig) -> Result<f64> {
    Ok(at_time(params, t, config)?.mean_part.values[t])
}

/// Semiclassical fidelity `M̄_sc(t) = mean over θ0 of |m(θ0, t)|²`.
pub fn semiclassical_fidelity_msc(
    params: &MapParams,
    t: usize,
    config: &SemiclassicalConfig,
) -> Result<f64> {
    Ok(at_time(params, t, config)?.full.values[t])
}

/// Fluctuating part `M̄_f(t) = M̄_sc - M̄_a` with its standard error.
pub fn fluctuating_part_mf(
    params: &MapParams,
    t: usize,
    config: &SemiclassicalConfig,
) -> Result<(f64, f64)> {
    let cols = at_time(params, t, config)?;
    Ok((cols.fluctuating.values[t], cols.fluctuating.errors[t]))
}

/// `|mean of exp(iσ s)|²` over action samples `s = ΔS/ε`.
pub fn ma_from_characteristic(samples: &[f64], sigma: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Input("no action samples"));
    }
    finite("sigma", sigma)?;
    let sum = samples.iter().fold(Complex64::new(0.0, 0.0), |acc, &s| {
        let (si, c) = libm::sincos(sigma * s);
        acc + Complex64::new(c, si)
    });
    Ok((sum / samples.len() as f64).norm_sqr())
}

/// All `ΔS/ε` values at time `t` on the configured `(θ0, p0)` set, member-major.
pub fn pooled_actions(
    config: &SemiclassicalConfig,
    params: &MapParams,
    t: usize,
) -> Result<Vec<f64>> {
    let dp = core::f64::consts::TAU / config.p0_grid as f64;
    let mut out = Vec::with_capacity(config.ensemble.count * config.p0_grid);
    for i in 0..config.ensemble.count {
        let theta0 = config.ensemble.member_theta(i, params)?;
        for j in 0..config.p0_grid {
            let mut x = PhasePoint::new(theta0, dp * j as f64);
            for _ in 0..t {
                x = step_with_action(x, params.kick());
            }
            out.push(x.action);
        }
    }
    Ok(out)
}
