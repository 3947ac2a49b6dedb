use alloc::vec::Vec;

use num_complex::Complex64;

use super::propagator::Propagator;
use super::state::{inner, QuantumState};
use crate::analysis::{Column, EnsembleInfo, FidelitySeries};
use crate::error::{Error, Result};
use crate::fft::Fourier;
use crate::params::MapParams;
use crate::stream::MemberStream;

/// The pair of maps compared by the echo: kick `k0` against kick `k`.
#[derive(Debug, Clone)]
pub struct Echo {
    params: MapParams,
    reference: Propagator,
    perturbed: Propagator,
}

impl Echo {
    pub fn new(params: &MapParams) -> Result<Self> {
        Self::with_kicks(params, params.k0(), params.k())
    }

    /// Echo between arbitrary kick coefficients; `M(t)` is symmetric under swapping them.
    pub fn with_kicks(params: &MapParams, reference: f64, perturbed: f64) -> Result<Self> {
        Ok(Self {
            params: *params,
            reference: Propagator::new(reference, params)?,
            perturbed: Propagator::new(perturbed, params)?,
        })
    }

    pub fn params(&self) -> &MapParams {
        &self.params
    }

    /// Fidelity amplitudes `m(t) = ⟨ψ_k(t)|ψ_k0(t)⟩` for `t = 0..=steps`.
    pub fn amplitudes<F: Fourier>(
        &self,
        state0: &QuantumState,
        steps: usize,
        fft: &mut F,
    ) -> Result<Vec<Complex64>> {
        if state0.dim() != self.params.dim() {
            return Err(Error::Dimension {
                expected: self.params.dim(),
                found: state0.dim(),
            });
        }
        let mut a = state0.clone();
        a.to_position(fft)?;
        let mut b = a.clone();
        let mut out = Vec::with_capacity(steps + 1);
        out.push(inner(b.amplitudes(), a.amplitudes()));
        for _ in 0..steps {
            self.reference.step(&mut a, fft)?;
            self.perturbed.step(&mut b, fft)?;
            out.push(inner(b.amplitudes(), a.amplitudes()));
        }
        Ok(out)
    }

    /// `M(t) = |m(t)|²` for `t = 0..=steps`; `M(0)` is exactly 1 for a normalised state.
    pub fn trace<F: Fourier>(
        &self,
        state0: &QuantumState,
        steps: usize,
        fft: &mut F,
    ) -> Result<Vec<f64>> {
        let mut m: Vec<f64> = self
            .amplitudes(state0, steps, fft)?
            .into_iter()
            .map(|z| z.norm_sqr())
            .collect();
        // identical copies: report the exact value rather than Σ|ψ|² roundoff
        m[0] = 1.0;
        Ok(m)
    }

    /// Fidelity trace of ensemble member `index`.
    pub fn member_trace<F: Fourier>(
        &self,
        ensemble: &Ensemble,
        index: usize,
        steps: usize,
        fft: &mut F,
    ) -> Result<Vec<f64>> {
        let state = ensemble.member_state(index, &self.params)?;
        self.trace(&state, steps, fft)
    }
}

/// Kind of initial state drawn for each ensemble member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InitialState {
    /// Grid delta at a uniformly drawn angle.
    PointSource,
    /// Minimum-uncertainty Gaussian at a uniform angle and a uniform grid momentum.
    Gaussian,
}

/// A reproducible set of initial states: member `i` draws from stream `(seed, i)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ensemble {
    pub initial: InitialState,
    pub count: usize,
    pub seed: u64,
}

impl Ensemble {
    pub fn new(initial: InitialState, count: usize, seed: u64) -> Result<Self> {
        if count == 0 {
            return Err(Error::Input("ensemble needs at least one member"));
        }
        Ok(Self {
            initial,
            count,
            seed,
        })
    }

    pub fn point_sources(count: usize, seed: u64) -> Result<Self> {
        Self::new(InitialState::PointSource, count, seed)
    }

    pub fn gaussians(count: usize, seed: u64) -> Result<Self> {
        Self::new(InitialState::Gaussian, count, seed)
    }

    /// Raw angle drawn for member `index`, uniform on `[0, 2π)`.
    pub fn angle(&self, index: usize) -> f64 {
        MemberStream::new(self.seed, index as u64).angle()
    }

    /// Initial angle actually used for member `index` (grid-snapped for point sources).
    pub fn member_theta(&self, index: usize, params: &MapParams) -> Result<f64> {
        let theta = self.angle(index);
        match self.initial {
            InitialState::PointSource => Ok(params.theta(params.snap_theta(theta)?)),
            InitialState::Gaussian => Ok(theta),
        }
    }

    pub fn member_state(&self, index: usize, params: &MapParams) -> Result<QuantumState> {
        let mut rng = MemberStream::new(self.seed, index as u64);
        let theta = rng.angle();
        match self.initial {
            InitialState::PointSource => QuantumState::point_source(theta, params),
            InitialState::Gaussian => {
                let n = params.dim() as u64;
                let m = rng.below(n) as i64 - (n / 2) as i64;
                Ok(QuantumState::gaussian(theta, m as f64 * params.hbar(), params)?.state)
            }
        }
    }

    /// Whether any Gaussian of this ensemble would overlap its own periodic image.
    pub fn wraps(&self, params: &MapParams) -> Result<bool> {
        Ok(match self.initial {
            InitialState::PointSource => false,
            InitialState::Gaussian => QuantumState::gaussian(0.0, 0.0, params)?.wrap_warning,
        })
    }

    pub fn info(&self) -> EnsembleInfo {
        EnsembleInfo {
            initial: self.initial,
            count: self.count,
            seed: self.seed,
        }
    }
}

/// Exact fidelity `M(t)`, `t = 0..=steps`, of a single initial state.
pub fn fidelity_series<F: Fourier>(
    state0: &QuantumState,
    params: &MapParams,
    steps: usize,
    fft: &mut F,
) -> Result<FidelitySeries> {
    let m = Echo::new(params)?.trace(state0, steps, fft)?;
    let errors = alloc::vec![0.0; m.len()];
    let mut series = FidelitySeries::new(*params, steps);
    series.exact = Some(Column::new(m, errors));
    Ok(series)
}

/// Ensemble-averaged exact fidelity, evaluated member by member in index order.
pub fn ensemble_mean_fidelity<F: Fourier>(
    ensemble: &Ensemble,
    params: &MapParams,
    steps: usize,
    fft: &mut F,
) -> Result<FidelitySeries> {
    let echo = Echo::new(params)?;
    let members = (0..ensemble.count)
        .map(|i| echo.member_trace(ensemble, i, steps, fft))
        .collect::<Result<Vec<_>>>()?;
    FidelitySeries::from_exact_members(*params, ensemble, &members)
}
