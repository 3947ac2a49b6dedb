use alloc::vec;
use alloc::vec::Vec;

use super::orbit::{classical_step, kick_potential, PhasePoint};
use crate::error::{Error, Result};
use crate::stats::Moments;
use crate::stream::StreamFamily;

/// Truncated autocorrelation sum `C(0)/2 + Σ_{τ=1..t_max} C(τ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Diffusion {
    pub value: f64,
    /// Standard error across orbits.
    pub std_error: f64,
    /// `C(τ)` for `τ = 0..=t_max`.
    pub correlations: Vec<f64>,
}

impl Diffusion {
    /// The zero-lag contribution `C(0)/2`.
    pub fn zero_lag(&self) -> f64 {
        self.correlations[0] / 2.0
    }
}

/// Action diffusion constant `K(E)` of `v(θ) = -(θ-π)²/2` along orbits of kick `K0`.
pub fn action_diffusion_constant(
    kick: f64,
    t_max: usize,
    orbits: usize,
    seed: u64,
) -> Result<Diffusion> {
    action_diffusion_constant_of(kick_potential, kick, t_max, orbits, seed)
}

/// Same as [`action_diffusion_constant`] for an arbitrary observable of `θ`.
///
/// Each orbit starts uniformly on the torus, which is the invariant measure,
/// and runs `2 t_max + 1` kicks; lagged products are averaged over the first
/// `t_max + 1` time origins. The observable is centred by its sample mean.
pub fn action_diffusion_constant_of<V: Fn(f64) -> f64>(
    observable: V,
    kick: f64,
    t_max: usize,
    orbits: usize,
    seed: u64,
) -> Result<Diffusion> {
    if t_max < 1 {
        return Err(Error::Input("the correlation sum needs t_max >= 1"));
    }
    if orbits == 0 {
        return Err(Error::Input("the correlation sum needs at least one orbit"));
    }
    let len = 2 * t_max + 1;
    let family = StreamFamily::new(seed);
    let orbit = |i: usize, out: &mut Vec<f64>| {
        out.clear();
        let mut rng = family.member(i as u64);
        let mut x = PhasePoint::new(rng.angle(), rng.angle());
        for _ in 0..len {
            out.push(observable(x.theta));
            x = classical_step(x, kick);
        }
    };

    let mut buf = Vec::with_capacity(len);
    let mut total = 0.0;
    for i in 0..orbits {
        orbit(i, &mut buf);
        total += buf.iter().sum::<f64>();
    }
    let mean = total / (orbits * len) as f64;

    let origins = t_max + 1;
    let mut corr = vec![0.0; t_max + 1];
    let mut per_orbit = Vec::with_capacity(orbits);
    let mut local = vec![0.0; t_max + 1];
    for i in 0..orbits {
        orbit(i, &mut buf);
        for v in &mut buf {
            *v -= mean;
        }
        for (lag, c) in local.iter_mut().enumerate() {
            *c = (0..origins).map(|s| buf[s] * buf[s + lag]).sum::<f64>() / origins as f64;
        }
        for (acc, &c) in corr.iter_mut().zip(&local) {
            *acc += c;
        }
        per_orbit.push(local[0] / 2.0 + local[1..].iter().sum::<f64>());
    }
    for c in &mut corr {
        *c /= orbits as f64;
    }
    let m = Moments::of(&per_orbit);
    Ok(Diffusion {
        value: corr[0] / 2.0 + corr[1..].iter().sum::<f64>(),
        std_error: m.std_error(),
        correlations: corr,
    })
}
