use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{finite, Error, Result};
use crate::fft::Fourier;
use crate::params::MapParams;

/// Which basis the amplitudes are expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    Position,
    /// DFT bin order: bin `b` holds momentum quantum number `b` or `b - N`.
    Momentum,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    amps: Vec<Complex64>,
    rep: Representation,
}

/// Periodised Gaussians whose antipodal self-overlap exceeds this are flagged.
pub const WRAP_WARNING_THRESHOLD: f64 = 1e-6;

/// A Gaussian initial state with its periodisation diagnostic.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianPacket {
    pub state: QuantumState,
    /// Momentum quantum number the packet was centred on.
    pub momentum_number: i64,
    /// Relative weight of the nearest image at the antipode, `exp(-π²/2s²)`.
    pub wrap_overlap: f64,
    /// Set when `wrap_overlap` exceeds [`WRAP_WARNING_THRESHOLD`].
    pub wrap_warning: bool,
}

impl QuantumState {
    pub fn from_amplitudes(amps: Vec<Complex64>, rep: Representation) -> Result<Self> {
        if amps.len() < 2 {
            return Err(Error::Input("a state needs at least two amplitudes"));
        }
        Ok(Self { amps, rep })
    }

    /// Unit amplitude on the grid point nearest `theta0`.
    pub fn point_source(theta0: f64, params: &MapParams) -> Result<Self> {
        let j = params.snap_theta(theta0)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); params.dim()];
        amps[j] = Complex64::new(1.0, 0.0);
        Ok(Self {
            amps,
            rep: Representation::Position,
        })
    }

    /// Minimum-uncertainty Gaussian centred at `(theta0, p0)`.
    ///
    /// The position variance of `|ψ|²` is `ħ/2`; the packet is summed over
    /// the images `theta0 + 2πn` and normalised. `p0` is snapped to the
    /// nearest momentum `ħ m`.
    pub fn gaussian(theta0: f64, p0: f64, params: &MapParams) -> Result<GaussianPacket> {
        finite("theta0", theta0)?;
        finite("p0", p0)?;
        let n = params.dim();
        let hbar = params.hbar();
        let m = libm::round(p0 / hbar) as i64;
        let var = hbar / 2.0;
        let width = 4.0 * var;

        // images beyond this contribute below e^{-745} relative to the peak
        let reach = libm::ceil(libm::sqrt(width * 745.0) / TAU) as i64 + 1;
        let center = theta0 - TAU * libm::floor(theta0 / TAU);
        let mut amps = Vec::with_capacity(n);
        for j in 0..n {
            let theta = params.theta(j);
            let mut env = 0.0;
            for img in -reach..=reach {
                let d = theta - center + TAU * img as f64;
                env += libm::exp(-d * d / width);
            }
            // e^{imθ_j} is periodic on the grid for integer m
            let q = (m.rem_euclid(n as i64) as u128 * j as u128) % n as u128;
            let (s, c) = libm::sincos(TAU * q as f64 / n as f64);
            amps.push(Complex64::new(env * c, env * s));
        }
        let mut state = Self {
            amps,
            rep: Representation::Position,
        };
        state.normalize()?;
        let wrap_overlap = libm::exp(-PI * PI / (2.0 * var));
        Ok(GaussianPacket {
            state,
            momentum_number: m,
            wrap_overlap,
            wrap_warning: wrap_overlap > WRAP_WARNING_THRESHOLD,
        })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn representation(&self) -> Representation {
        self.rep
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm_sqr();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::Degenerate(
                "cannot normalise a zero or non-finite state",
            ));
        }
        let s = 1.0 / libm::sqrt(n);
        for a in &mut self.amps {
            *a *= s;
        }
        Ok(())
    }

    /// Multiplies every amplitude by `e^{iφ}`.
    pub fn rotate_phase(&mut self, phi: f64) {
        let (s, c) = libm::sincos(phi);
        let u = Complex64::new(c, s);
        for a in &mut self.amps {
            *a *= u;
        }
    }

    /// `⟨self|other⟩`; both states must share dimension and representation.
    pub fn overlap(&self, other: &Self) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        if self.rep != other.rep {
            return Err(Error::Input(
                "overlap of states in different representations",
            ));
        }
        Ok(inner(&self.amps, &other.amps))
    }

    /// Unitary change to the momentum basis; no-op if already there.
    pub fn to_momentum<F: Fourier>(&mut self, fft: &mut F) -> Result<()> {
        if self.rep == Representation::Momentum {
            return Ok(());
        }
        check_plan(fft, self.dim())?;
        fft.forward(&mut self.amps);
        self.scale(1.0 / libm::sqrt(self.dim() as f64));
        self.rep = Representation::Momentum;
        Ok(())
    }

    /// Unitary change to the position basis; no-op if already there.
    pub fn to_position<F: Fourier>(&mut self, fft: &mut F) -> Result<()> {
        if self.rep == Representation::Position {
            return Ok(());
        }
        check_plan(fft, self.dim())?;
        fft.inverse(&mut self.amps);
        self.scale(1.0 / libm::sqrt(self.dim() as f64));
        self.rep = Representation::Position;
        Ok(())
    }

    fn scale(&mut self, s: f64) {
        for a in &mut self.amps {
            *a *= s;
        }
    }

    pub(crate) fn set_representation(&mut self, rep: Representation) {
        self.rep = rep;
    }
}

pub(crate) fn inner(bra: &[Complex64], ket: &[Complex64]) -> Complex64 {
    bra.iter()
        .zip(ket)
        .fold(Complex64::new(0.0, 0.0), |acc, (a, b)| acc + a.conj() * b)
}

pub(crate) fn check_plan<F: Fourier>(fft: &F, dim: usize) -> Result<()> {
    if fft.len() != dim {
        return Err(Error::Dimension {
            expected: dim,
            found: fft.len(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fft::Plan;

    fn params(n: usize) -> MapParams {
        MapParams::from_sigma(2.0, 0.0, n).unwrap()
    }

    #[test]
    fn point_source_on_grid() {
        let p = params(8);
        let s = QuantumState::point_source(0.0, &p).unwrap();
        assert_eq!(s.amplitudes()[0], Complex64::new(1.0, 0.0));
        assert!(s.amplitudes()[1..]
            .iter()
            .all(|a| *a == Complex64::new(0.0, 0.0)));
        for theta in [0.3, 1.7, 6.2, 3.0] {
            let s = QuantumState::point_source(theta, &p).unwrap();
            assert_eq!(s.norm_sqr(), 1.0);
        }
        assert!(QuantumState::point_source(f64::NAN, &p).is_err());
    }

    #[test]
    fn point_source_is_flat_in_momentum() {
        let p = params(8);
        let mut s = QuantumState::point_source(0.0, &p).unwrap();
        let mut fft = Plan::new(8);
        s.to_momentum(&mut fft).unwrap();
        assert_eq!(s.representation(), Representation::Momentum);
        for a in s.amplitudes() {
            assert!((a.norm() - 1.0 / 8f64.sqrt()).abs() < 1e-15);
        }
        s.to_position(&mut fft).unwrap();
        assert!((s.amplitudes()[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn gaussian_is_normalised_and_centred() {
        let p = params(1024);
        let g = QuantumState::gaussian(PI, 0.0, &p).unwrap();
        assert!((g.state.norm_sqr() - 1.0).abs() < 1e-12);
        assert!(!g.wrap_warning);
        let (mut c, mut s) = (0.0, 0.0);
        for (j, a) in g.state.amplitudes().iter().enumerate() {
            let w = a.norm_sqr();
            c += w * libm::cos(p.theta(j));
            s += w * libm::sin(p.theta(j));
        }
        let mean = libm::atan2(s, c).rem_euclid(TAU);
        assert!((mean - PI).abs() < 1e-6);

        for (theta, p0) in [(0.0, 0.0), (6.0, 1.0), (0.01, -2.5)] {
            let g = QuantumState::gaussian(theta, p0, &p).unwrap();
            assert!((g.state.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn gaussian_position_variance_is_half_hbar() {
        let p = params(4096);
        let g = QuantumState::gaussian(PI, 0.0, &p).unwrap();
        let var: f64 = g
            .state
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(j, a)| a.norm_sqr() * (p.theta(j) - PI).powi(2))
            .sum();
        assert!((var / (p.hbar() / 2.0) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn gaussian_momentum_centre() {
        let p = params(256);
        let g = QuantumState::gaussian(1.0, 5.0 * p.hbar(), &p).unwrap();
        assert_eq!(g.momentum_number, 5);
        let mut s = g.state.clone();
        s.to_momentum(&mut Plan::new(256)).unwrap();
        let peak = s
            .amplitudes()
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
            .unwrap()
            .0;
        assert_eq!(p.momentum_number(peak), 5);
    }

    #[test]
    fn small_torus_flags_wrapping() {
        let g = QuantumState::gaussian(1.0, 0.0, &params(8)).unwrap();
        assert!(g.wrap_warning);
        assert!((g.state.norm_sqr() - 1.0).abs() < 1e-12);
        let g = QuantumState::gaussian(1.0, 0.0, &params(64)).unwrap();
        assert!(!g.wrap_warning);
    }

    #[test]
    fn point_source_overlap_picks_out_gaussian_peak() {
        let p = params(1024);
        let theta0 = p.theta(300);
        let g = QuantumState::gaussian(theta0, 0.0, &p).unwrap();
        let delta = QuantumState::point_source(theta0, &p).unwrap();
        let ov = delta.overlap(&g.state).unwrap().norm_sqr();
        // independent route: scan the grid for the largest density
        let max = g
            .state
            .amplitudes()
            .iter()
            .map(|a| a.norm_sqr())
            .fold(0.0, f64::max);
        assert!((ov - max).abs() < 1e-15);
    }

    #[test]
    fn overlap_checks_shapes() {
        let a = QuantumState::point_source(0.0, &params(8)).unwrap();
        let b = QuantumState::point_source(0.0, &params(16)).unwrap();
        assert!(matches!(a.overlap(&b), Err(Error::Dimension { .. })));
        let mut c = a.clone();
        c.to_momentum(&mut Plan::new(8)).unwrap();
        assert!(a.overlap(&c).is_err());
        assert!(c.to_position(&mut Plan::new(4)).is_err());
    }
}
