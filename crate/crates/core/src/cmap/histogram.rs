use alloc::vec;
use alloc::vec::Vec;

use super::orbit::{mean_action, step_with_action, PhasePoint};
use crate::error::{Error, Result};
use crate::stats::Moments;
use crate::stream::StreamFamily;

/// Default histogram range is the sample mean ± this many standard deviations.
pub const CLIP_SIGMAS: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Binning {
    /// Freedman–Diaconis width `2 IQR n^{-1/3}` over mean ± 6 sd (clipped to the data).
    FreedmanDiaconis,
    /// Equal bins over mean ± 6 sd (clipped to the data).
    Count(usize),
    /// Equal bins over an explicit range.
    Range { lo: f64, hi: f64, bins: usize },
}

/// Empirical distribution of `(ΔS - ⟨ΔS⟩)/ε` at a fixed time.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionHistogram {
    /// `bins + 1` increasing edges.
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    /// Samples that fell inside the range; equals the sum of `counts`.
    pub sample_count: u64,
    /// Samples outside the range.
    pub clipped: u64,
    /// Moments of the raw `ΔS/ε` samples.
    pub mean: f64,
    pub variance: f64,
    pub excess_kurtosis: f64,
    /// Value subtracted before binning, `⟨ΔS⟩/ε = -π² t/6`.
    pub center: f64,
    /// The centred samples, in draw order.
    pub samples: Vec<f64>,
}

impl ActionHistogram {
    /// Bins `samples` (already centred by `center`); moments refer to the raw values.
    pub fn from_samples(samples: Vec<f64>, center: f64, binning: Binning) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Input("no samples to bin"));
        }
        let m = Moments::of(&samples);
        let (lo, hi, bins) = resolve(&samples, &m, binning)?;
        let width = (hi - lo) / bins as f64;
        let edges: Vec<f64> = (0..=bins)
            .map(|i| if i == bins { hi } else { lo + width * i as f64 })
            .collect();
        let mut counts = vec![0u64; bins];
        let mut clipped = 0;
        for &x in &samples {
            if !(lo..=hi).contains(&x) {
                clipped += 1;
                continue;
            }
            let i = libm::floor((x - lo) / width) as usize;
            counts[i.min(bins - 1)] += 1;
        }
        let sample_count = counts.iter().sum();
        Ok(Self {
            edges,
            counts,
            sample_count,
            clipped,
            mean: m.mean + center,
            variance: m.variance,
            excess_kurtosis: m.excess_kurtosis,
            center,
            samples,
        })
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    /// Probability density per bin; integrates to one over the binned samples.
    pub fn density(&self) -> Vec<f64> {
        let n = self.sample_count.max(1) as f64;
        self.counts
            .iter()
            .zip(self.edges.windows(2))
            .map(|(&c, e)| c as f64 / (n * (e[1] - e[0])))
            .collect()
    }
}

fn resolve(samples: &[f64], m: &Moments, binning: Binning) -> Result<(f64, f64, usize)> {
    let clipped_range = || {
        let sd = libm::sqrt(m.variance);
        let (min, max) = samples
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| {
                (a.min(x), b.max(x))
            });
        (
            min.max(m.mean - CLIP_SIGMAS * sd),
            max.min(m.mean + CLIP_SIGMAS * sd),
        )
    };
    let (lo, hi, bins) = match binning {
        Binning::Range { lo, hi, bins } => (lo, hi, bins),
        Binning::Count(bins) => {
            let (lo, hi) = clipped_range();
            (lo, hi, bins)
        }
        Binning::FreedmanDiaconis => {
            let (lo, hi) = clipped_range();
            let mut sorted = samples.to_vec();
            sorted.sort_unstable_by(f64::total_cmp);
            let iqr = quantile(&sorted, 0.75) - quantile(&sorted, 0.25);
            let h = 2.0 * iqr / libm::cbrt(samples.len() as f64);
            if !(h > 0.0) {
                return Err(Error::Binning("Freedman-Diaconis width is zero"));
            }
            (lo, hi, libm::ceil((hi - lo) / h).max(1.0) as usize)
        }
    };
    if bins == 0 {
        return Err(Error::Binning("zero bins requested"));
    }
    if !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Binning("histogram range has zero width"));
    }
    Ok((lo, hi, bins))
}

/// Linear-interpolated quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let i = libm::floor(pos) as usize;
    let frac = pos - i as f64;
    if i + 1 < sorted.len() {
        sorted[i] + frac * (sorted[i + 1] - sorted[i])
    } else {
        sorted[i]
    }
}

/// Raw `ΔS/ε` after `steps` kicks for `count` uniform initial points.
///
/// Sample `i` starts from stream `(seed, i)`.
pub fn sample_actions(kick: f64, steps: usize, count: usize, seed: u64) -> Vec<f64> {
    let family = StreamFamily::new(seed);
    (0..count)
        .map(|i| {
            let mut rng = family.member(i as u64);
            let mut x = PhasePoint::new(rng.angle(), rng.angle());
            for _ in 0..steps {
                x = step_with_action(x, kick);
            }
            x.action
        })
        .collect()
}

/// Histogram of `(ΔS - ⟨ΔS⟩)/ε` over uniform initial points on the torus.
pub fn sample_action_distribution(
    kick: f64,
    steps: usize,
    count: usize,
    seed: u64,
    binning: Binning,
) -> Result<ActionHistogram> {
    if count == 0 {
        return Err(Error::Input("need at least one sample"));
    }
    let center = mean_action(steps);
    let samples = sample_actions(kick, steps, count, seed)
        .into_iter()
        .map(|s| s - center)
        .collect();
    ActionHistogram::from_samples(samples, center, binning)
}
