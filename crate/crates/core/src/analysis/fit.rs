use libm::{log, sqrt};

use crate::error::{Error, Result};

/// Which points of a fidelity series enter an exponential fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Window {
    /// `floor < M(t) < ceiling` with `floor = max(10/N, plateau_factor × plateau)`.
    ///
    /// The plateau is the mean of the last 20% of the series. Without a
    /// dimension the `10/N` term is dropped.
    Auto {
        ceiling: f64,
        plateau_factor: f64,
        dimension: Option<usize>,
    },
    /// `floor < M(t) < ceiling` with explicit bounds.
    Values { floor: f64, ceiling: f64 },
    /// Every step in `t_lo..=t_hi`.
    Steps { t_lo: usize, t_hi: usize },
}

impl Window {
    /// The default policy: ceiling 0.5, floor `max(10/N, 5 × plateau)`.
    pub fn auto(dimension: usize) -> Self {
        Window::Auto {
            ceiling: 0.5,
            plateau_factor: 5.0,
            dimension: Some(dimension),
        }
    }

    /// The `(floor, ceiling)` this policy resolves to on `values`.
    pub fn bounds(&self, values: &[f64]) -> Option<(f64, f64)> {
        match *self {
            Window::Auto {
                ceiling,
                plateau_factor,
                dimension,
            } => {
                let from_dim = dimension.map_or(0.0, |n| 10.0 / n as f64);
                Some((from_dim.max(plateau_factor * plateau(values)), ceiling))
            }
            Window::Values { floor, ceiling } => Some((floor, ceiling)),
            Window::Steps { .. } => None,
        }
    }

    /// Steps selected on `values`, in increasing order.
    pub fn select(&self, values: &[f64]) -> alloc::vec::Vec<usize> {
        match *self {
            Window::Steps { t_lo, t_hi } => (t_lo..=t_hi.min(values.len().saturating_sub(1)))
                .filter(|&t| t < values.len())
                .collect(),
            _ => {
                let (floor, ceiling) = self.bounds(values).unwrap_or((0.0, 1.0));
                let floor = floor.max(0.0);
                // from the first drop below the ceiling to the first drop to the floor
                let Some(start) = values.iter().position(|&m| m < ceiling) else {
                    return alloc::vec::Vec::new();
                };
                values[start..]
                    .iter()
                    .enumerate()
                    .take_while(|(_, &m)| m > floor)
                    .filter(|(_, &m)| m < ceiling)
                    .map(|(i, _)| start + i)
                    .collect()
            }
        }
    }
}

/// Mean of the last 20% of the series (at least one point).
pub fn plateau(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let tail = (values.len() / 5).max(1);
    let s = &values[values.len() - tail..];
    s.iter().sum::<f64>() / s.len() as f64
}

/// Least-squares line through `(t, ln M(t))` over a window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    /// Decay rate, minus the slope.
    pub gamma: f64,
    /// Fitted `ln M` at `t = 0`.
    pub intercept: f64,
    pub t_lo: usize,
    pub t_hi: usize,
    pub points: usize,
    pub residual_rms: f64,
    pub r_squared: f64,
    /// Resolved value bounds, when the window was value-based.
    pub floor: Option<f64>,
    pub ceiling: Option<f64>,
}

const MIN_POINTS: usize = 4;

/// Unweighted exponential fit of `values[t]` over `window`.
pub fn fit_decay_rate(values: &[f64], window: &Window) -> Result<DecayFit> {
    fit(values, None, window)
}

/// Exponential fit with weights `(M/δM)²`, the inverse variance of `ln M`.
///
/// Points with a zero error get the largest finite weight in the window.
pub fn fit_decay_rate_weighted(
    values: &[f64],
    errors: &[f64],
    window: &Window,
) -> Result<DecayFit> {
    if errors.len() != values.len() {
        return Err(Error::Dimension {
            expected: values.len(),
            found: errors.len(),
        });
    }
    fit(values, Some(errors), window)
}

fn fit(values: &[f64], errors: Option<&[f64]>, window: &Window) -> Result<DecayFit> {
    let picked: alloc::vec::Vec<usize> = window
        .select(values)
        .into_iter()
        .filter(|&t| values[t] > 0.0 && values[t].is_finite())
        .collect();
    let (t_lo, t_hi) = match (picked.first(), picked.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => (0, 0),
    };
    if picked.len() < MIN_POINTS {
        return Err(Error::Fit {
            needed: MIN_POINTS,
            found: picked.len(),
            t_lo,
            t_hi,
        });
    }

    let weights: alloc::vec::Vec<f64> = match errors {
        None => alloc::vec![1.0; picked.len()],
        Some(err) => {
            let raw: alloc::vec::Vec<f64> = picked
                .iter()
                .map(|&t| {
                    let rel = err[t] / values[t];
                    if rel > 0.0 {
                        1.0 / (rel * rel)
                    } else {
                        f64::INFINITY
                    }
                })
                .collect();
            let cap = raw
                .iter()
                .copied()
                .filter(|w| w.is_finite())
                .fold(1.0, f64::max);
            raw.into_iter()
                .map(|w| if w.is_finite() { w } else { cap })
                .collect()
        }
    };

    let (mut sw, mut st, mut sy) = (0.0, 0.0, 0.0);
    for (&t, &w) in picked.iter().zip(&weights) {
        sw += w;
        st += w * t as f64;
        sy += w * log(values[t]);
    }
    let (tm, ym) = (st / sw, sy / sw);
    let (mut stt, mut sty, mut syy) = (0.0, 0.0, 0.0);
    for (&t, &w) in picked.iter().zip(&weights) {
        let dt = t as f64 - tm;
        let dy = log(values[t]) - ym;
        stt += w * dt * dt;
        sty += w * dt * dy;
        syy += w * dy * dy;
    }
    let slope = sty / stt;
    let intercept = ym - slope * tm;
    let mut ss_res = 0.0;
    for (&t, &w) in picked.iter().zip(&weights) {
        let r = log(values[t]) - (intercept + slope * t as f64);
        ss_res += w * r * r;
    }
    let r_squared = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    let (floor, ceiling) = match window.bounds(values) {
        Some((f, c)) => (Some(f), Some(c)),
        None => (None, None),
    };
    Ok(DecayFit {
        gamma: -slope,
        intercept,
        t_lo,
        t_hi,
        points: picked.len(),
        residual_rms: sqrt(ss_res / sw),
        r_squared,
        floor,
        ceiling,
    })
}

/// Golden-rule decay rate `Γ = 2 σ² K(E)`.
pub fn fgr_rate(sigma: f64, diffusion: f64) -> f64 {
    2.0 * diffusion * sigma * sigma
}
