//! Built-in experiments reproducing the five published figures at their caption parameters.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use anyhow::bail;
use clap::ValueEnum;
use echo_core::semiclassics::DEFAULT_P0_GRID;

use crate::config::{
    ActionTask, ExactSpec, ExperimentConfig, FidelityTask, Initial, Perturbation, RateTask,
    SemiclassicalSpec, SigmaGrid,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// FGR breakdown at K0=0.4: fixed ε, N = 4096..32768, plus M̄_a at σ=0.4.
    Fig1,
    /// Decay rate against σ for K0 = 0.4, 1, 2.
    Fig2,
    /// Exact against semiclassical parts, K0=2, σ = 0.9 and 3.
    Fig3,
    /// Exact against semiclassical parts, K0=1, σ = 6.
    Fig4,
    /// Action-difference histograms at t=10 for K0 = 0.4 and 2.
    Fig5,
}

pub const ALL: [Preset; 5] = [
    Preset::Fig1,
    Preset::Fig2,
    Preset::Fig3,
    Preset::Fig4,
    Preset::Fig5,
];

/// `ε` of the fig1 curves, held fixed while `N` doubles.
pub const FIG1_EPSILON: f64 = 7.67e-5;
pub const FIG1_DIMS: [usize; 4] = [4096, 8192, 16_384, 32_768];
/// fig1 curves run until `σ²t` reaches this.
pub const FIG1_SIGMA2_T: f64 = 2.5;
pub const LARGE_DIM: usize = 131_072;

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig1 => "fig1",
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
        }
    }

    pub fn config(self) -> ExperimentConfig {
        let mut c = ExperimentConfig::empty(self.name());
        match self {
            Preset::Fig1 => {
                for n in FIG1_DIMS {
                    let sigma = FIG1_EPSILON * n as f64 / (2.0 * PI);
                    c.fidelity.push(FidelityTask {
                        label: format!("fidelity-N{n}"),
                        kick: 0.4,
                        dim: n,
                        perturbation: Perturbation::Epsilon(FIG1_EPSILON),
                        steps: (FIG1_SIGMA2_T / (sigma * sigma)).ceil() as usize,
                        exact: Some(ExactSpec {
                            initial: Initial::PointSource,
                            members: 400,
                        }),
                        semiclassical: None,
                        fit: true,
                    });
                }
                c.fidelity.push(FidelityTask {
                    label: "mean-part-sigma0.4".into(),
                    kick: 0.4,
                    dim: 32_768,
                    perturbation: Perturbation::Sigma(0.4),
                    steps: (FIG1_SIGMA2_T / 0.16).ceil() as usize,
                    exact: None,
                    semiclassical: Some(SemiclassicalSpec {
                        p0_grid: DEFAULT_P0_GRID,
                        members: 400,
                    }),
                    fit: false,
                });
            }
            Preset::Fig2 => {
                for (kick, tag) in [(0.4, "0.4"), (1.0, "1"), (2.0, "2")] {
                    c.rates.push(RateTask {
                        label: format!("rates-K{tag}"),
                        kick,
                        dim: LARGE_DIM,
                        sigmas: SigmaGrid::Log {
                            from: 0.1,
                            to: 10.0,
                            count: 40,
                        },
                        initial: Initial::Gaussian,
                        members: 100,
                        max_steps: 400,
                    });
                }
            }
            Preset::Fig3 => {
                for (sigma, tag) in [(0.9, "0.9"), (3.0, "3")] {
                    c.fidelity
                        .push(comparison(format!("fidelity-sigma{tag}"), 2.0, sigma));
                }
            }
            Preset::Fig4 => c
                .fidelity
                .push(comparison("fidelity-sigma6".into(), 1.0, 6.0)),
            Preset::Fig5 => {
                for (kick, tag) in [(0.4, "0.4"), (2.0, "2")] {
                    c.actions.push(ActionTask {
                        label: format!("actions-K{tag}"),
                        kick,
                        steps: 10,
                        samples: 1_000_000,
                        bins: None,
                    });
                }
            }
        }
        c
    }
}

fn comparison(label: String, kick: f64, sigma: f64) -> FidelityTask {
    FidelityTask {
        label,
        kick,
        dim: LARGE_DIM,
        perturbation: Perturbation::Sigma(sigma),
        steps: 20,
        exact: Some(ExactSpec {
            initial: Initial::PointSource,
            members: 500,
        }),
        semiclassical: Some(SemiclassicalSpec {
            p0_grid: DEFAULT_P0_GRID,
            members: 500,
        }),
        fit: true,
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        match ALL.iter().find(|p| p.name() == s) {
            Some(p) => Ok(*p),
            None => bail!("unknown preset `{s}` (expected one of fig1..fig5)"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate() {
        for p in ALL {
            p.config().validate().unwrap();
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
        }
        assert!("fig6".parse::<Preset>().is_err());
    }

    #[test]
    fn fig1_sigmas_double_with_n() {
        let c = Preset::Fig1.config();
        let sigmas: Vec<f64> = c.fidelity[..4]
            .iter()
            .map(|t| t.perturbation.params(t.kick, t.dim).unwrap().sigma())
            .collect();
        for (s, want) in sigmas.iter().zip([0.05, 0.1, 0.2, 0.4]) {
            assert!((s - want).abs() < 1e-4, "{s} vs {want}");
        }
        assert_eq!(c.fidelity[0].steps, 1000);
    }

    #[test]
    fn scaling_keeps_sigma() {
        let mut c = Preset::Fig1.config();
        c.scale = 0.25;
        let s = c.scaled().unwrap();
        assert_eq!(s.fidelity[0].dim, 1024);
        assert_eq!(s.fidelity[0].exact.unwrap().members, 100);
        let p = s.fidelity[3]
            .perturbation
            .params(0.4, s.fidelity[3].dim)
            .unwrap();
        assert!((p.sigma() - 0.4).abs() < 1e-4);
    }
}
