use core::f64::consts::{PI, TAU};

use crate::params::centered;

/// `⟨v⟩` over the torus: `-⟨(θ-π)²⟩/2 = -π²/6`.
pub const MEAN_POTENTIAL: f64 = -PI * PI / 6.0;

/// A point on the torus with the action difference (per unit ε) gathered so far.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub theta: f64,
    pub p: f64,
    pub action: f64,
}

impl PhasePoint {
    /// Reduces both coordinates into `[0, 2π)`; the action starts at zero.
    pub fn new(theta: f64, p: f64) -> Self {
        Self {
            theta: wrap_angle(theta),
            p: wrap_angle(p),
            action: 0.0,
        }
    }
}

/// `x mod 2π` in `[0, 2π)`.
#[inline(always)]
pub fn wrap_angle(x: f64) -> f64 {
    if (0.0..TAU).contains(&x) {
        return x;
    }
    let r = x - TAU * libm::floor(x / TAU);
    // rounding can land exactly on TAU; NaN falls through unchanged
    #[allow(clippy::manual_range_contains)]
    if r >= TAU || r < 0.0 {
        0.0
    } else {
        r
    }
}

/// `v(θ) = -(θ-π)²/2` for `θ ∈ [0, 2π)`; at `θ = 0` the offset is `-π`.
#[inline(always)]
pub fn kick_potential(theta: f64) -> f64 {
    let d = centered(theta);
    -0.5 * d * d
}

/// One iteration of the map; the stored action is carried over unchanged.
#[inline(always)]
pub fn classical_step(point: PhasePoint, kick: f64) -> PhasePoint {
    let p = wrap_angle(point.p + kick * centered(point.theta));
    let theta = wrap_angle(point.theta + p);
    PhasePoint {
        theta,
        p,
        action: point.action,
    }
}

/// One iteration that also adds `v(θ)` at the angle entering the kick.
#[inline(always)]
pub fn step_with_action(point: PhasePoint, kick: f64) -> PhasePoint {
    let mut next = classical_step(point, kick);
    next.action = point.action + kick_potential(point.theta);
    next
}

/// `ΔS/ε = Σ_{t'=1..t} v(θ(t'))` along the unperturbed orbit from `point`.
pub fn accumulate_action(point: PhasePoint, steps: usize, kick: f64) -> f64 {
    let mut x = PhasePoint {
        action: 0.0,
        ..point
    };
    for _ in 0..steps {
        x = step_with_action(x, kick);
    }
    x.action
}

/// Phase-space mean of `ΔS/ε` after `steps` kicks, `-π² t/6`.
pub fn mean_action(steps: usize) -> f64 {
    MEAN_POTENTIAL * steps as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_point() {
        for k in [0.4, 1.0, 2.0, 7.3] {
            let x = classical_step(PhasePoint::new(PI, 0.0), k);
            assert_eq!((x.theta, x.p), (PI, 0.0));
        }
    }

    #[test]
    fn hand_iteration() {
        let x = classical_step(PhasePoint::new(PI, 1.0), 0.4);
        assert_eq!(x.p, 1.0);
        assert!((x.theta - 4.141593).abs() < 1e-6);
    }

    #[test]
    fn action_along_short_orbit() {
        assert_eq!(accumulate_action(PhasePoint::new(1.0, 1.0), 0, 0.4), 0.0);

        // by hand: pre-kick angles 1, then 1 + (1 + 0.4(1-π)) = 1.1433629, then
        // p = 0.1433629 + 0.4(1.1433629-π) + 2π = 5.6272564, θ = 1.1433629 + p - 2π
        let thetas = [1.0, 1.143_362_938_564_083, 0.487_433_991_117_880];
        let want: f64 = thetas.iter().map(|t| -(t - PI).powi(2) / 2.0).sum();
        assert!((want + 7.811_949_646_748).abs() < 1e-11);
        let got = accumulate_action(PhasePoint::new(1.0, 1.0), 3, 0.4);
        assert!((got - want).abs() < 1e-12);
    }

    #[test]
    fn wrapping() {
        assert_eq!(wrap_angle(0.0), 0.0);
        assert_eq!(wrap_angle(TAU), 0.0);
        assert!((wrap_angle(-1.0) - (TAU - 1.0)).abs() < 1e-15);
        assert!((wrap_angle(3.0 * TAU + 0.5) - 0.5).abs() < 1e-14);
        assert!(wrap_angle(-1e-18) < TAU);
    }

    #[test]
    fn potential_at_discontinuity() {
        assert_eq!(kick_potential(0.0), -PI * PI / 2.0);
        assert_eq!(kick_potential(PI), 0.0);
    }
}
