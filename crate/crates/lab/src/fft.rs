//! rustfft-backed transform for the split-operator propagator.

use std::sync::Arc;

use echo_core::{Complex64, Fourier};
use rustfft::{Fft, FftPlanner};

/// Forward/inverse plans of one length plus their scratch space.
///
/// Cloning shares the plans and allocates fresh scratch, so each worker
/// thread can own a clone.
pub struct RustFft {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
}

impl RustFft {
    pub fn new(len: usize) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(len);
        let inverse = planner.plan_fft_inverse(len);
        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        Self {
            forward,
            inverse,
            scratch: vec![Complex64::new(0.0, 0.0); scratch_len],
        }
    }
}

impl Clone for RustFft {
    fn clone(&self) -> Self {
        Self {
            forward: Arc::clone(&self.forward),
            inverse: Arc::clone(&self.inverse),
            scratch: vec![Complex64::new(0.0, 0.0); self.scratch.len()],
        }
    }
}

impl Fourier for RustFft {
    fn len(&self) -> usize {
        self.forward.len()
    }

    fn forward(&mut self, buf: &mut [Complex64]) {
        self.forward.process_with_scratch(buf, &mut self.scratch);
    }

    fn inverse(&mut self, buf: &mut [Complex64]) {
        self.inverse.process_with_scratch(buf, &mut self.scratch);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use echo_core::Plan;

    #[test]
    fn agrees_with_builtin_plan() {
        for n in [8usize, 1024, 96] {
            let x: Vec<Complex64> = (0..n)
                .map(|j| Complex64::new((j as f64 * 0.37).sin(), (j as f64 * 1.1).cos()))
                .collect();
            let (mut a, mut b) = (x.clone(), x.clone());
            RustFft::new(n).forward(&mut a);
            Plan::new(n).forward(&mut b);
            for (u, v) in a.iter().zip(&b) {
                assert!((u - v).norm() < 1e-10);
            }
            RustFft::new(n).inverse(&mut a);
            for (u, v) in a.iter().zip(&x) {
                assert!((u / n as f64 - v).norm() < 1e-12);
            }
        }
    }
}
