use alloc::vec::Vec;

use crate::cmap::ActionHistogram;
use crate::error::{Error, Result};
use crate::stats::Moments;

/// Distance of a sample from the Gaussian with the same mean and variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gaussianity {
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
    pub excess_kurtosis: f64,
    /// Large-sample standard error of the excess kurtosis.
    pub kurtosis_std_error: f64,
    /// `sup |F_n(x) - Φ((x-mean)/sd)|` over the sample.
    pub sup_distance: f64,
}

/// Minimum sample size for the diagnostics to mean anything.
pub const MIN_SAMPLES: usize = 10_000;

pub fn gaussianity_metrics(hist: &ActionHistogram) -> Result<Gaussianity> {
    gaussianity_of_samples(&hist.samples)
}

pub fn gaussianity_of_samples(samples: &[f64]) -> Result<Gaussianity> {
    if samples.len() < MIN_SAMPLES {
        return Err(Error::Degenerate("Gaussianity needs at least 10^4 samples"));
    }
    let m = Moments::of(samples);
    if !(m.variance > 0.0) {
        return Err(Error::Degenerate("sample variance is zero"));
    }
    let sd = libm::sqrt(m.variance);
    let mut z: Vec<f64> = samples.iter().map(|&x| (x - m.mean) / sd).collect();
    z.sort_unstable_by(f64::total_cmp);
    let n = z.len() as f64;
    let mut sup: f64 = 0.0;
    for (i, &x) in z.iter().enumerate() {
        let f = normal_cdf(x);
        sup = sup
            .max((f - i as f64 / n).abs())
            .max(((i + 1) as f64 / n - f).abs());
    }
    Ok(Gaussianity {
        count: samples.len(),
        mean: m.mean,
        variance: m.variance,
        excess_kurtosis: m.excess_kurtosis,
        kurtosis_std_error: m.kurtosis_std_error(),
        sup_distance: sup,
    })
}

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z * core::f64::consts::FRAC_1_SQRT_2)
}
