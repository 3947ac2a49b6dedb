//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Run a subset with `cargo test --test acceptance -- 3 7`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use echo_core::analysis::{fit_decay_rate, Window};
use echo_core::cmap::{
    action_diffusion_constant, lyapunov_analytic, lyapunov_numeric, sample_action_distribution,
    Binning,
};
use echo_core::qmap::{Echo, Ensemble, QuantumState, Representation};
use echo_core::semiclassics::SemiclassicalConfig;
use echo_core::stream::MemberStream;
use echo_core::{Complex64, Fourier, MapParams, Plan};
use echo_lab::fft::RustFft;
use echo_lab::parallel::{exact_series, semiclassical_series};
use echo_lab::runner::rate_steps;
use echo_lab::{presets, run, RunOptions};

const SEED: u64 = 42;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Self { pass, detail }
    }
}

fn within(x: f64, want: f64, rel: f64) -> bool {
    (x - want).abs() <= rel * want.abs()
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

fn lyapunov_closed_form() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (k, want) in [(0.4, 0.62), (1.0, 0.96), (2.0, 1.32)] {
        let l = lyapunov_analytic(k).unwrap();
        let ok = (l - want).abs() <= 0.005;
        pass &= ok;
        parts.push(format!("K0={k}: {l:.4} vs {want} {}", mark(ok)));
    }
    Outcome::new(pass, format!("{} (±0.005)", parts.join(", ")))
}

fn tangent_map() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for k in [0.4, 1.0, 2.0] {
        let want = lyapunov_analytic(k).unwrap();
        let est = lyapunov_numeric(k, 10_000, 100, SEED).unwrap();
        let ok = within(est.exponent, want, 0.02);
        pass &= ok;
        parts.push(format!(
            "K0={k}: {:.4} vs {want:.4} {}",
            est.exponent,
            mark(ok)
        ));
    }
    Outcome::new(pass, format!("{} (±2%)", parts.join(", ")))
}

fn action_statistics() -> Outcome {
    let strong =
        sample_action_distribution(2.0, 10, 1_000_000, SEED, Binning::FreedmanDiaconis).unwrap();
    let weak =
        sample_action_distribution(0.4, 10, 1_000_000, SEED, Binning::FreedmanDiaconis).unwrap();
    let mean_ok = within(strong.mean, -16.45, 0.01);
    let var_ok = within(strong.variance, 21.65, 0.03);
    let kurt_ok = strong.excess_kurtosis.abs() < 0.05;
    let weak_ok = weak.excess_kurtosis.abs() > 0.1;
    Outcome::new(
        mean_ok && var_ok && kurt_ok && weak_ok,
        format!(
            "K0=2: mean {:.3} vs -16.45 (±1%) {}, variance {:.3} vs 21.65 (±3%) {}, \
             excess kurtosis {:.4} (|.|<0.05) {}; K0=0.4: excess kurtosis {:.3} (|.|>0.1) {}",
            strong.mean,
            mark(mean_ok),
            strong.variance,
            mark(var_ok),
            strong.excess_kurtosis,
            mark(kurt_ok),
            weak.excess_kurtosis,
            mark(weak_ok)
        ),
    )
}

fn diffusion_constant() -> Outcome {
    let d = action_diffusion_constant(2.0, 40, 50_000, SEED).unwrap();
    Outcome::new(
        within(d.value, 1.08, 0.03),
        format!("K(E) = {:.4} ± {:.4} vs 1.08 (±3%)", d.value, d.std_error),
    )
}

fn golden_rule_regime() -> Outcome {
    let n = 32_768;
    let lyapunov = lyapunov_analytic(2.0).unwrap();
    let ensemble = Ensemble::gaussians(100, SEED).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for sigma in [0.1, 0.2, 0.3] {
        let p = MapParams::from_sigma(2.0, sigma, n).unwrap();
        let steps = rate_steps(sigma, lyapunov, 400);
        let s = exact_series(&p, &ensemble, steps).unwrap();
        let want = 2.16 * sigma * sigma;
        match fit_decay_rate(&s.exact.unwrap().values, &Window::auto(n)) {
            Ok(f) => {
                let ok = within(f.gamma, want, 0.2);
                pass &= ok;
                parts.push(format!(
                    "σ={sigma}: γ {:.4} vs {want:.4} [t {}..{}] {}",
                    f.gamma,
                    f.t_lo,
                    f.t_hi,
                    mark(ok)
                ));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("σ={sigma}: no fit ({e})"));
            }
        }
    }
    Outcome::new(pass, format!("{} (±20%)", parts.join(", ")))
}

fn golden_rule_breakdown() -> Outcome {
    let epsilon = presets::FIG1_EPSILON;
    let ensemble = Ensemble::point_sources(400, SEED).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for n in [4096, 8192] {
        let p = MapParams::new(0.4, epsilon, n).unwrap();
        let sigma = p.sigma();
        let steps = (presets::FIG1_SIGMA2_T / (sigma * sigma)).ceil() as usize;
        let m = exact_series(&p, &ensemble, steps)
            .unwrap()
            .exact
            .unwrap()
            .values;
        let mut checked = 0;
        let mut below = Vec::new();
        for (t, &v) in m.iter().enumerate().skip(1) {
            if v <= 0.01 {
                continue;
            }
            checked += 1;
            if v <= (-2.2 * sigma * sigma * t as f64).exp() {
                below.push(t);
            }
        }
        let ok = below.is_empty() && checked > 0;
        pass &= ok;
        let first = below.first().map_or(String::new(), |t| {
            format!(
                ", first at t={t}: M̄={:.4} vs {:.4}",
                m[*t],
                (-2.2 * sigma * sigma * *t as f64).exp()
            )
        });
        parts.push(format!(
            "N={n} σ={sigma:.3}: {}/{checked} steps not above e^(-2.2σ²t){first} {}",
            below.len(),
            mark(ok)
        ));
    }
    Outcome::new(pass, parts.join("; "))
}

fn semiclassical_agreement() -> Outcome {
    let n = 32_768;
    let steps = 20;
    let p = MapParams::from_sigma(2.0, 0.9, n).unwrap();
    let exact = exact_series(&p, &Ensemble::point_sources(100, SEED).unwrap(), steps)
        .unwrap()
        .exact
        .unwrap()
        .values;
    let config = SemiclassicalConfig::new(16_384, 100, SEED, steps).unwrap();
    let sc = semiclassical_series(&[p], &config).unwrap().remove(0);
    let mut worst: f64 = 1.0;
    let mut compared = 0;
    for (&m, &msc) in exact.iter().zip(&sc.full.values) {
        if m > 0.003 && m < 0.5 {
            compared += 1;
            let r = msc / m;
            worst = if (r.ln()).abs() > worst.ln().abs() {
                r
            } else {
                worst
            };
        }
    }
    let identity = (0..=steps)
        .map(|t| (sc.full.values[t] - sc.mean_part.values[t] - sc.fluctuating.values[t]).abs())
        .fold(0.0, f64::max);
    let ratio_ok = compared > 0 && (0.5..=2.0).contains(&worst);
    let id_ok = identity <= 1e-14;
    Outcome::new(
        ratio_ok && id_ok,
        format!(
            "worst M̄_sc/M̄ = {worst:.3} over {compared} steps (within ×2) {}; \
             max |M̄_sc - M̄_a - M̄_f| = {identity:.1e} (≤1e-14) {}",
            mark(ratio_ok),
            mark(id_ok)
        ),
    )
}

fn lyapunov_regime() -> Outcome {
    let n = 131_072;
    let steps = 20;
    let members = 500;
    let ensemble = Ensemble::point_sources(members, SEED).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for kick in [1.0, 2.0] {
        let p = MapParams::from_sigma(kick, 6.0, n).unwrap();
        let lambda = lyapunov_analytic(kick).unwrap();
        let m = exact_series(&p, &ensemble, steps)
            .unwrap()
            .exact
            .unwrap()
            .values;
        let fit = match fit_decay_rate(&m, &Window::auto(n)) {
            Ok(f) => f,
            Err(e) => {
                pass = false;
                parts.push(format!("K0={kick}: no fit ({e})"));
                continue;
            }
        };
        let rate_ok = within(fit.gamma, lambda, 0.25);
        pass &= rate_ok;
        parts.push(format!(
            "K0={kick}: γ {:.4} vs λ {lambda:.4} [t {}..{}] (±25%) {}",
            fit.gamma,
            fit.t_lo,
            fit.t_hi,
            mark(rate_ok)
        ));
        if kick == 1.0 {
            let config = SemiclassicalConfig::new(16_384, members, SEED, steps).unwrap();
            let sc = semiclassical_series(&[p], &config).unwrap().remove(0);
            let ratios: Vec<(usize, f64)> = (fit.t_lo..=fit.t_hi)
                .map(|t| (t, sc.mean_part.values[t] / sc.fluctuating.values[t]))
                .collect();
            let over: Vec<String> = ratios
                .iter()
                .filter(|(_, r)| r.is_nan() || *r >= 0.1)
                .map(|(t, r)| format!("t={t}: {r:.3}"))
                .collect();
            let ok = over.is_empty();
            pass &= ok;
            let max = ratios.iter().map(|r| r.1).fold(0.0, f64::max);
            parts.push(format!(
                "K0=1: max M̄_a/M̄_f {max:.3} over the window (<0.1){} {}",
                if ok {
                    String::new()
                } else {
                    format!(" [{}]", over.join(", "))
                },
                mark(ok)
            ));
        }
    }
    Outcome::new(pass, parts.join("; "))
}

/// `U_{jl} = (1/N) Σ_m e^{2πi m(j-l)/N} e^{-iħm²/2} e^{i k (θ_l-π)²/2}`, m ∈ [-N/2, N/2).
fn dense_map(kick: f64, n: usize) -> Vec<Vec<Complex64>> {
    let hbar = 2.0 * PI / n as f64;
    let half = n as i64 / 2;
    (0..n)
        .map(|j| {
            (0..n)
                .map(|l| {
                    let theta = 2.0 * PI * l as f64 / n as f64;
                    let phase = Complex64::from_polar(1.0, kick * (theta - PI).powi(2) / 2.0);
                    let sum: Complex64 = (-half..n as i64 - half)
                        .map(|m| {
                            let m = m as f64;
                            Complex64::from_polar(
                                1.0,
                                2.0 * PI * m * (j as f64 - l as f64) / n as f64
                                    - hbar * m * m / 2.0,
                            )
                        })
                        .sum();
                    sum * phase / n as f64
                })
                .collect()
        })
        .collect()
}

fn random_state(n: usize, seed: u64) -> QuantumState {
    let mut rng = MemberStream::new(seed, 0);
    let amps = (0..n)
        .map(|_| Complex64::new(rng.uniform() - 0.5, rng.uniform() - 0.5))
        .collect();
    let mut s = QuantumState::from_amplitudes(amps, Representation::Position).unwrap();
    s.normalize().unwrap();
    s
}

fn step_all<F: Fourier>(
    echo_kick: f64,
    p: &MapParams,
    s: &mut QuantumState,
    fft: &mut F,
    steps: usize,
) {
    let prop = echo_core::qmap::Propagator::new(echo_kick, p).unwrap();
    for _ in 0..steps {
        prop.step(s, fft).unwrap();
    }
}

fn oracle_equivalence() -> Outcome {
    // dense matrix, both FFT backends
    let mut dense_err: f64 = 0.0;
    for (n, kick, sigma) in [(8, 2.0, 0.9), (32, 0.4, 0.3), (64, 1.0, 6.0)] {
        let p = MapParams::from_sigma(kick, sigma, n).unwrap();
        let u = dense_map(p.k(), n);
        let start = random_state(n, n as u64);
        let mut want: Vec<Complex64> = start.amplitudes().to_vec();
        let (mut a, mut b) = (start.clone(), start);
        let (mut plan, mut rust) = (Plan::new(n), RustFft::new(n));
        for _ in 0..5 {
            want = u
                .iter()
                .map(|row| row.iter().zip(&want).map(|(x, y)| x * y).sum())
                .collect();
            step_all(p.k(), &p, &mut a, &mut plan, 1);
            step_all(p.k(), &p, &mut b, &mut rust, 1);
            for s in [&a, &b] {
                for (x, y) in s.amplitudes().iter().zip(&want) {
                    dense_err = dense_err.max((x - y).norm());
                }
            }
        }
    }
    let dense_ok = dense_err <= 1e-10;

    let n = 1024;
    let p = MapParams::from_sigma(2.0, 0.0, n).unwrap();
    let state = QuantumState::point_source(2.0, &p).unwrap();
    let m = Echo::new(&p)
        .unwrap()
        .trace(&state, 100, &mut RustFft::new(n))
        .unwrap();
    let unperturbed_err = m.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
    let unperturbed_ok = unperturbed_err <= 1e-10;

    let n = 131_072;
    let p = MapParams::from_sigma(2.0, 0.9, n).unwrap();
    let mut s = random_state(n, 1);
    step_all(p.k(), &p, &mut s, &mut RustFft::new(n), 1000);
    let drift = (s.norm_sqr() - 1.0).abs();
    let drift_ok = drift < 1e-10;

    Outcome::new(
        dense_ok && unperturbed_ok && drift_ok,
        format!(
            "dense oracle N≤64 max |Δψ| {dense_err:.1e} (≤1e-10) {}; ε=0 max |M-1| over 100 steps \
             {unperturbed_err:.1e} (≤1e-10) {}; norm drift after 10³ steps at N=131072 {drift:.1e} (<1e-10) {}",
            mark(dense_ok),
            mark(unperturbed_ok),
            mark(drift_ok)
        ),
    )
}

fn tables(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read(&p).unwrap(),
            )
        })
        .collect()
}

fn determinism() -> Outcome {
    let root = tempfile::tempdir().unwrap();
    let mut pass = true;
    let mut files = 0;
    let mut differing = Vec::new();
    for preset in presets::ALL {
        let mut config = preset.config();
        config.scale = 1.0 / 64.0;
        let mut out = Vec::new();
        for threads in [1, 3] {
            let dir = root.path().join(format!("{preset}-{threads}"));
            let opts = RunOptions {
                out: dir.clone(),
                threads: Some(threads),
                quiet: true,
                ..RunOptions::default()
            };
            run(&config, &opts).unwrap();
            out.push(tables(&dir));
        }
        files += out[0].len();
        if out[0] != out[1] || out[0].is_empty() {
            pass = false;
            differing.push(preset.to_string());
        }
    }
    Outcome::new(
        pass,
        format!(
            "{files} CSVs from all five presets at scale 1/64, 1 vs 3 threads: {}",
            if pass {
                "byte-identical".to_string()
            } else {
                format!("differ in {}", differing.join(", "))
            }
        ),
    )
}

type Criterion = (u32, &'static str, fn() -> Outcome);

const CRITERIA: [Criterion; 10] = [
    (1, "Lyapunov closed form", lyapunov_closed_form),
    (2, "tangent-map cross-check", tangent_map),
    (3, "action statistics", action_statistics),
    (4, "diffusion constant", diffusion_constant),
    (5, "golden-rule regime", golden_rule_regime),
    (6, "golden-rule breakdown", golden_rule_breakdown),
    (7, "semiclassical agreement", semiclassical_agreement),
    (8, "Lyapunov regime", lyapunov_regime),
    (9, "oracle equivalence", oracle_equivalence),
    (10, "determinism", determinism),
];

fn main() -> ExitCode {
    let wanted: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failed = Vec::new();
    for (id, name, f) in CRITERIA {
        if !wanted.is_empty() && !wanted.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let outcome = f();
        println!(
            "criterion {id:>2} {} {name}: {} ({:.1} s)",
            if outcome.pass { "PASS" } else { "FAIL" },
            outcome.detail,
            start.elapsed().as_secs_f64()
        );
        if !outcome.pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
