use core::f64::consts::{PI, TAU};

use crate::error::{finite, Error, Result};

/// Kick strength, perturbation and Hilbert-space dimension of one map.
///
/// `K0` is the classical kick strength and `epsilon` its perturbation; the
/// quantum map on `N` levels has `hbar = 2π/N`, so the quantum kick
/// coefficients are `k0 = K0/hbar` and `k = k0 + sigma` with
/// `sigma = epsilon/hbar`. `epsilon ≪ K0` is assumed but not checked.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapParams {
    kick: f64,
    epsilon: f64,
    sigma: f64,
    dim: usize,
}

impl MapParams {
    /// Builds the parameter set from the classical perturbation `epsilon`.
    pub fn new(kick: f64, epsilon: f64, dim: usize) -> Result<Self> {
        finite("K0", kick)?;
        finite("epsilon", epsilon)?;
        check_dim(dim)?;
        Ok(Self {
            kick,
            epsilon,
            sigma: epsilon * dim as f64 / TAU,
            dim,
        })
    }

    /// Builds the parameter set from the quantum perturbation `sigma = epsilon/hbar`.
    pub fn from_sigma(kick: f64, sigma: f64, dim: usize) -> Result<Self> {
        finite("K0", kick)?;
        finite("sigma", sigma)?;
        check_dim(dim)?;
        Ok(Self {
            kick,
            epsilon: sigma * TAU / dim as f64,
            sigma,
            dim,
        })
    }

    /// Same map, different perturbation.
    pub fn with_sigma(&self, sigma: f64) -> Result<Self> {
        Self::from_sigma(self.kick, sigma, self.dim)
    }

    /// Classical kick strength `K0`.
    pub fn kick(&self) -> f64 {
        self.kick
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Hilbert-space dimension `N`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hbar(&self) -> f64 {
        TAU / self.dim as f64
    }

    /// Unperturbed quantum kick coefficient `K0/hbar`.
    pub fn k0(&self) -> f64 {
        self.kick * self.dim as f64 / TAU
    }

    /// Perturbed quantum kick coefficient `k0 + sigma`.
    pub fn k(&self) -> f64 {
        self.k0() + self.sigma
    }

    /// Position grid point `θ_j = 2πj/N`.
    pub fn theta(&self, j: usize) -> f64 {
        TAU * j as f64 / self.dim as f64
    }

    /// Nearest grid index to `theta` (taken mod 2π).
    pub fn snap_theta(&self, theta: f64) -> Result<usize> {
        finite("theta0", theta)?;
        let n = self.dim as f64;
        let x = libm::round(theta / TAU * n);
        let j = x - n * libm::floor(x / n);
        Ok(j as usize % self.dim)
    }

    /// Momentum quantum number stored in DFT bin `bin`, in `[-N/2, N/2)`.
    pub fn momentum_number(&self, bin: usize) -> i64 {
        let n = self.dim as i64;
        let b = bin as i64;
        if b >= n / 2 {
            b - n
        } else {
            b
        }
    }

    /// DFT bin holding momentum quantum number `m` (any integer, wrapped).
    pub fn momentum_bin(&self, m: i64) -> usize {
        m.rem_euclid(self.dim as i64) as usize
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::Input("Hilbert-space dimension N must be at least 2"));
    }
    Ok(())
}

/// Offset `θ - π` used by the sawtooth force, for `θ` already in `[0, 2π)`.
#[inline(always)]
pub(crate) fn centered(theta: f64) -> f64 {
    theta - PI
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_triple_is_consistent() {
        for &n in &[2usize, 8, 4096, 131072] {
            let p = MapParams::from_sigma(2.0, 0.37, n).unwrap();
            assert!((p.hbar() * n as f64 - TAU).abs() < 1e-12);
            assert!((p.sigma() * p.hbar() - p.epsilon()).abs() < 1e-15);
            assert!((p.k() - p.k0() - p.sigma()).abs() < 1e-9);
            let q = MapParams::new(2.0, p.epsilon(), n).unwrap();
            assert!((q.sigma() - 0.37).abs() < 1e-12);
        }
    }

    #[test]
    fn epsilon_from_sigma() {
        let p = MapParams::from_sigma(0.4, 0.05, 4096).unwrap();
        assert!((p.epsilon() - 7.670e-5).abs() < 5e-8);
        let q = MapParams::from_sigma(0.4, 0.05, 8192).unwrap();
        assert!((q.epsilon() - 3.835e-5).abs() < 5e-8);
        let r = MapParams::from_sigma(0.4, 0.1, 8192).unwrap();
        assert!((r.epsilon() - p.epsilon()).abs() < 1e-18);
        let z = MapParams::from_sigma(0.4, 0.0, 64).unwrap();
        assert_eq!(z.epsilon(), 0.0);
        assert_eq!(z.k(), z.k0());
    }

    #[test]
    fn rejects_small_dimension() {
        assert!(MapParams::from_sigma(1.0, 0.1, 1).is_err());
        assert!(MapParams::from_sigma(1.0, 0.1, 0).is_err());
        assert!(MapParams::from_sigma(f64::NAN, 0.1, 8).is_err());
    }

    #[test]
    fn snapping_and_bins() {
        let p = MapParams::from_sigma(1.0, 0.0, 8).unwrap();
        assert_eq!(p.snap_theta(0.0).unwrap(), 0);
        assert_eq!(p.snap_theta(TAU - 1e-9).unwrap(), 0);
        assert_eq!(p.snap_theta(PI).unwrap(), 4);
        assert_eq!(p.snap_theta(-TAU / 8.0).unwrap(), 7);
        assert!(p.snap_theta(f64::INFINITY).is_err());
        assert_eq!(p.momentum_number(3), 3);
        assert_eq!(p.momentum_number(4), -4);
        assert_eq!(p.momentum_number(7), -1);
        assert_eq!(p.momentum_bin(-1), 7);
        assert_eq!(p.momentum_bin(-4), 4);
    }
}
