use libm::{log, sqrt};

use super::orbit::{classical_step, PhasePoint};
use crate::error::{Error, Result};
use crate::stats::Moments;
use crate::stream::StreamFamily;

/// `λ = ln[(2 + K + sqrt((2+K)² - 4))/2]`, the larger eigenvalue exponent of the tangent map.
pub fn lyapunov_analytic(kick: f64) -> Result<f64> {
    if !(kick > 0.0) || !kick.is_finite() {
        return Err(Error::Domain(
            "the closed-form Lyapunov exponent needs K0 > 0",
        ));
    }
    let a = 2.0 + kick;
    Ok(log((a + sqrt(a * a - 4.0)) / 2.0))
}

/// Tangent map at `(θ, p)` acting on `(dθ, dp)`.
///
/// `dp̄ = K dθ + dp`, `dθ̄ = dθ + dp̄`; valid everywhere except on the
/// discontinuity `θ = 0`, where the force jumps.
pub fn jacobian(_point: &PhasePoint, kick: f64) -> [[f64; 2]; 2] {
    [[1.0 + kick, 1.0], [kick, 1.0]]
}

/// Benettin estimate over an ensemble of orbits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovEstimate {
    /// Mean largest exponent over orbits.
    pub exponent: f64,
    /// Standard error of `exponent` across orbits.
    pub std_error: f64,
    /// Mean smallest exponent; `exponent + minimum` is `ln|det|` per step.
    pub minimum: f64,
    pub orbits: usize,
    pub steps: usize,
}

/// Tangent-map iteration with Gram–Schmidt renormalisation after every step.
pub fn lyapunov_numeric(
    kick: f64,
    steps: usize,
    orbits: usize,
    seed: u64,
) -> Result<LyapunovEstimate> {
    if steps < 100 {
        return Err(Error::Input("Lyapunov estimate needs at least 100 steps"));
    }
    if orbits == 0 {
        return Err(Error::Input("Lyapunov estimate needs at least one orbit"));
    }
    let family = StreamFamily::new(seed);
    let mut largest = alloc::vec::Vec::with_capacity(orbits);
    let mut sum_min = 0.0;
    for i in 0..orbits {
        let mut rng = family.member(i as u64);
        let mut x = PhasePoint::new(rng.angle(), rng.angle());
        let phi = rng.angle();
        let mut u = [libm::cos(phi), libm::sin(phi)];
        let mut w = [-u[1], u[0]];
        let (mut l1, mut l2) = (0.0, 0.0);
        for _ in 0..steps {
            let j = jacobian(&x, kick);
            let a = mat_vec(&j, u);
            let b = mat_vec(&j, w);
            let na = sqrt(a[0] * a[0] + a[1] * a[1]);
            u = [a[0] / na, a[1] / na];
            let proj = b[0] * u[0] + b[1] * u[1];
            let r = [b[0] - proj * u[0], b[1] - proj * u[1]];
            let nr = sqrt(r[0] * r[0] + r[1] * r[1]);
            w = [r[0] / nr, r[1] / nr];
            l1 += log(na);
            l2 += log(nr);
            x = classical_step(x, kick);
        }
        largest.push(l1 / steps as f64);
        sum_min += l2 / steps as f64;
    }
    let m = Moments::of(&largest);
    Ok(LyapunovEstimate {
        exponent: m.mean,
        std_error: m.std_error(),
        minimum: sum_min / orbits as f64,
        orbits,
        steps,
    })
}

#[inline(always)]
fn mat_vec(m: &[[f64; 2]; 2], v: [f64; 2]) -> [f64; 2] {
    [
        m[0][0] * v[0] + m[0][1] * v[1],
        m[1][0] * v[0] + m[1][1] * v[1],
    ]
}
