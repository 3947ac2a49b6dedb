use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::state::{check_plan, QuantumState, Representation};
use crate::error::{finite, Error, Result};
use crate::fft::Fourier;
use crate::params::MapParams;

/// One period of the quantum map for a fixed kick coefficient.
///
/// Holds the diagonal kick phases `exp(i k (θ_j-π)²/2)` and the free phases
/// `exp(-i p_m²/2ħ)` with the `1/N` of the FFT round trip folded in. A step
/// takes a position-space state and returns it in position space.
#[derive(Debug, Clone)]
pub struct Propagator {
    kick: Vec<Complex64>,
    free: Vec<Complex64>,
}

impl Propagator {
    /// `kick_coefficient` is `k0` for the unperturbed map or `k` for the perturbed one.
    pub fn new(kick_coefficient: f64, params: &MapParams) -> Result<Self> {
        finite("kick coefficient", kick_coefficient)?;
        let n = params.dim();
        let scale = 2.0 * PI * PI / (n as f64 * n as f64);
        let kick = (0..n)
            .map(|j| {
                // θ_j - π = 2π(j - N/2)/N; d² is exact in f64 for any usable N
                let d = j as f64 - n as f64 / 2.0;
                let (s, c) = libm::sincos(kick_coefficient * scale * d * d);
                Complex64::new(c, s)
            })
            .collect();
        Ok(Self {
            kick,
            free: free_phases(params),
        })
    }

    pub fn dim(&self) -> usize {
        self.kick.len()
    }

    /// Applies one period in place.
    pub fn step<F: Fourier>(&self, state: &mut QuantumState, fft: &mut F) -> Result<()> {
        let n = self.dim();
        if state.dim() != n {
            return Err(Error::Dimension {
                expected: n,
                found: state.dim(),
            });
        }
        check_plan(fft, n)?;
        state.to_position(fft)?;
        let amps = state.amplitudes_mut();
        for (a, &k) in amps.iter_mut().zip(&self.kick) {
            *a *= k;
        }
        fft.forward(amps);
        for (a, &f) in amps.iter_mut().zip(&self.free) {
            *a *= f;
        }
        fft.inverse(amps);
        state.set_representation(Representation::Position);
        Ok(())
    }
}

/// `exp(-i ħ m²/2) / N` in DFT bin order.
fn free_phases(params: &MapParams) -> Vec<Complex64> {
    let n = params.dim();
    let inv = 1.0 / n as f64;
    let two_n = 2 * n as u128;
    (0..n)
        .map(|bin| {
            let m = params.momentum_number(bin).unsigned_abs() as u128;
            // ħm²/2 = πm²/N, periodic in m² with period 2N
            let q = (m * m) % two_n;
            let (s, c) = libm::sincos(-PI * q as f64 / n as f64);
            Complex64::new(c * inv, s * inv)
        })
        .collect()
}

/// One period of the map with kick coefficient `kick`, returned in position space.
///
/// Builds the phase tables on every call; use [`Propagator`] inside loops.
pub fn evolve_step<F: Fourier>(
    mut state: QuantumState,
    kick: f64,
    params: &MapParams,
    fft: &mut F,
) -> Result<QuantumState> {
    if state.dim() != params.dim() {
        return Err(Error::Dimension {
            expected: params.dim(),
            found: state.dim(),
        });
    }
    Propagator::new(kick, params)?.step(&mut state, fft)?;
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fft::Plan;
    use crate::stream::MemberStream;

    #[test]
    fn momentum_zero_is_invariant_without_kick() {
        let p = MapParams::from_sigma(2.0, 0.0, 16).unwrap();
        let amp = Complex64::new(0.25, 0.0);
        let s =
            QuantumState::from_amplitudes(alloc::vec![amp; 16], Representation::Position).unwrap();
        let out = evolve_step(s, 0.0, &p, &mut Plan::new(16)).unwrap();
        for a in out.amplitudes() {
            assert!((a - amp).norm() < 1e-15);
        }
    }

    #[test]
    fn step_is_unitary() {
        let p = MapParams::from_sigma(2.0, 0.3, 4096).unwrap();
        let mut rng = MemberStream::new(3, 0);
        let amps = (0..4096)
            .map(|_| Complex64::new(rng.uniform() - 0.5, rng.uniform() - 0.5))
            .collect();
        let mut s = QuantumState::from_amplitudes(amps, Representation::Position).unwrap();
        s.normalize().unwrap();
        let mut fft = Plan::new(4096);
        let prop = Propagator::new(p.k0(), &p).unwrap();
        prop.step(&mut s, &mut fft).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        assert_eq!(s.representation(), Representation::Position);
    }

    #[test]
    fn accepts_momentum_input() {
        let p = MapParams::from_sigma(1.0, 0.0, 32).unwrap();
        let mut fft = Plan::new(32);
        let a = QuantumState::point_source(1.0, &p).unwrap();
        let mut b = a.clone();
        b.to_momentum(&mut fft).unwrap();
        let a = evolve_step(a, p.k0(), &p, &mut fft).unwrap();
        let b = evolve_step(b, p.k0(), &p, &mut fft).unwrap();
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn rejects_mismatched_dimensions() {
        let p = MapParams::from_sigma(1.0, 0.0, 32).unwrap();
        let q = MapParams::from_sigma(1.0, 0.0, 16).unwrap();
        let s = QuantumState::point_source(1.0, &q).unwrap();
        assert!(matches!(
            evolve_step(s.clone(), 1.0, &p, &mut Plan::new(32)),
            Err(Error::Dimension { .. })
        ));
        let prop = Propagator::new(1.0, &q).unwrap();
        let mut s = s;
        assert!(prop.step(&mut s, &mut Plan::new(32)).is_err());
    }
}
