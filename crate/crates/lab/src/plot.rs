//! Minimal SVG plots written next to the tables. Convenience only; the tables
//! are the contract.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

use crate::output::{write_file, Table};

const W: f64 = 640.0;
const H: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 5] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];

#[derive(Clone, Copy)]
enum Style {
    Line,
    Dashed,
    Markers,
    Bars,
}

struct Series {
    name: String,
    points: Vec<(f64, f64)>,
    style: Style,
}

#[derive(Clone, Copy)]
struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn fit(values: impl Iterator<Item = f64>, log: bool) -> Option<Self> {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values.filter(|v| v.is_finite() && (!log || *v > 0.0)) {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if lo > hi {
            return None;
        }
        if log {
            lo = 10f64.powf(lo.log10().floor());
            hi = 10f64.powf(hi.log10().ceil());
            if lo == hi {
                hi *= 10.0;
            }
        } else if lo == hi {
            lo -= 0.5;
            hi += 0.5;
        }
        Some(Self { lo, hi, log })
    }

    /// Position in [0, 1].
    fn unit(&self, v: f64) -> f64 {
        if self.log {
            (v.log10() - self.lo.log10()) / (self.hi.log10() - self.lo.log10())
        } else {
            (v - self.lo) / (self.hi - self.lo)
        }
    }

    fn ticks(&self) -> Vec<f64> {
        if self.log {
            let (a, b) = (
                self.lo.log10().round() as i32,
                self.hi.log10().round() as i32,
            );
            let step = ((b - a) as usize).div_ceil(8).max(1);
            (a..=b).step_by(step).map(|e| 10f64.powi(e)).collect()
        } else {
            let raw = (self.hi - self.lo) / 6.0;
            let mag = 10f64.powf(raw.log10().floor());
            let step = [1.0, 2.0, 5.0, 10.0]
                .iter()
                .map(|m| m * mag)
                .find(|s| *s >= raw)
                .unwrap_or(10.0 * mag);
            let first = (self.lo / step).ceil() as i64;
            let last = (self.hi / step).floor() as i64;
            (first..=last).map(|i| i as f64 * step).collect()
        }
    }
}

fn label(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-2 || v.abs() >= 1e4) {
        format!("{v:e}")
    } else {
        format!("{}", (v * 1e6).round() / 1e6)
    }
}

fn render(
    title: &str,
    xlabel: &str,
    ylabel: &str,
    series: &[Series],
    xlog: bool,
    ylog: bool,
) -> Option<String> {
    let all = || series.iter().flat_map(|s| s.points.iter());
    let x = Axis::fit(all().map(|p| p.0), xlog)?;
    let mut y = Axis::fit(all().map(|p| p.1), ylog)?;
    if series.iter().any(|s| matches!(s.style, Style::Bars)) && !ylog {
        y.lo = y.lo.min(0.0);
    }
    let pw = W - LEFT - RIGHT;
    let ph = H - TOP - BOTTOM;
    let px = |v: f64| LEFT + x.unit(v) * pw;
    let py = |v: f64| TOP + (1.0 - y.unit(v)) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="18" text-anchor="middle" font-size="14">{title}</text>"#,
        W / 2.0
    );
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for t in x.ticks() {
        let xp = px(t);
        let _ = writeln!(
            s,
            r#"<line x1="{xp:.1}" y1="{:.1}" x2="{xp:.1}" y2="{:.1}" stroke="black"/><text x="{xp:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            TOP + ph,
            TOP + ph + 5.0,
            TOP + ph + 18.0,
            label(t)
        );
    }
    for t in y.ticks() {
        let yp = py(t);
        let _ = writeln!(
            s,
            r#"<line x1="{:.1}" y1="{yp:.1}" x2="{LEFT}" y2="{yp:.1}" stroke="black"/><text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            yp + 4.0,
            label(t)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{xlabel}</text>"#,
        LEFT + pw / 2.0,
        H - 12.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{ylabel}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0
    );

    let inside = |&(a, b): &(f64, f64)| {
        a.is_finite() && b.is_finite() && (!x.log || a > 0.0) && (!y.log || b > 0.0)
    };
    for (i, ser) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<(f64, f64)> = ser.points.iter().copied().filter(inside).collect();
        match ser.style {
            Style::Line | Style::Dashed => {
                let path: Vec<String> = pts
                    .iter()
                    .map(|&(a, b)| format!("{:.1},{:.1}", px(a), py(b)))
                    .collect();
                let dash = if matches!(ser.style, Style::Dashed) {
                    r#" stroke-dasharray="6 4""#
                } else {
                    ""
                };
                let _ = writeln!(
                    s,
                    r#"<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash} points="{}"/>"#,
                    path.join(" ")
                );
            }
            Style::Markers => {
                for &(a, b) in &pts {
                    let _ = writeln!(
                        s,
                        r#"<circle cx="{:.1}" cy="{:.1}" r="2.5" fill="{color}"/>"#,
                        px(a),
                        py(b)
                    );
                }
            }
            Style::Bars => {
                let width = if pts.len() > 1 {
                    (px(pts[1].0) - px(pts[0].0)).abs()
                } else {
                    4.0
                };
                let base = py(y.lo.max(if y.log { y.lo } else { 0.0 }));
                for &(a, b) in &pts {
                    let top = py(b);
                    let _ = writeln!(
                        s,
                        r#"<rect x="{:.1}" y="{top:.1}" width="{width:.2}" height="{:.1}" fill="{color}" fill-opacity="0.6"/>"#,
                        px(a),
                        (base - top).max(0.0)
                    );
                }
            }
        }
        let ly = TOP + 16.0 + 16.0 * i as f64;
        let lx = W - RIGHT - 120.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="{color}" stroke-width="3"/><text x="{:.1}" y="{ly:.1}">{}</text>"#,
            ly - 4.0,
            lx + 18.0,
            ly - 4.0,
            lx + 24.0,
            ser.name
        );
    }
    s.push_str("</svg>\n");
    Some(s)
}

fn save(out: &Path, stem: &str, svg: Option<String>) -> Result<PathBuf> {
    let svg = svg.context("nothing to plot")?;
    let path = out.join(format!("{stem}.svg"));
    write_file(&path, svg.as_bytes())?;
    Ok(path)
}

/// Every fidelity column against `t` on a log scale.
pub fn fidelity(out: &Path, stem: &str, table: &Table) -> Result<PathBuf> {
    let t = table.column("t").context("table has no t column")?;
    let series: Vec<Series> = [
        ("M", "exact M"),
        ("Msc", "M_sc"),
        ("Ma", "M_a"),
        ("Mf", "M_f"),
    ]
    .iter()
    .filter_map(|(col, name)| {
        let v = table.column(col)?;
        Some(Series {
            name: (*name).into(),
            points: t.iter().copied().zip(v).collect(),
            style: if *col == "M" {
                Style::Line
            } else {
                Style::Markers
            },
        })
    })
    .collect();
    save(
        out,
        stem,
        render(stem, "t", "fidelity", &series, false, true),
    )
}

/// Fitted rate against `σ` with the golden-rule and Lyapunov references.
pub fn rates(out: &Path, stem: &str, table: &Table) -> Result<PathBuf> {
    let sigma = table.column("sigma").context("table has no sigma column")?;
    let col = |name: &str| -> Result<Vec<(f64, f64)>> {
        Ok(sigma
            .iter()
            .copied()
            .zip(
                table
                    .column(name)
                    .with_context(|| format!("table has no {name} column"))?,
            )
            .collect())
    };
    let series = vec![
        Series {
            name: "fitted".into(),
            points: col("gamma")?,
            style: Style::Markers,
        },
        Series {
            name: "golden rule".into(),
            points: col("fgr")?,
            style: Style::Line,
        },
        Series {
            name: "Lyapunov".into(),
            points: col("lyapunov")?,
            style: Style::Dashed,
        },
    ];
    save(
        out,
        stem,
        render(stem, "sigma", "decay rate", &series, true, true),
    )
}

/// Histogram bars with the normal density of equal variance.
pub fn histogram(out: &Path, stem: &str, table: &Table, variance: f64) -> Result<PathBuf> {
    let left = table
        .column("bin_left")
        .context("table has no bin_left column")?;
    let right = table
        .column("bin_right")
        .context("table has no bin_right column")?;
    let density = table
        .column("density")
        .context("table has no density column")?;
    let mid = left.iter().zip(&right).map(|(a, b)| 0.5 * (a + b));
    let norm = (2.0 * std::f64::consts::PI * variance).sqrt();
    let series = vec![
        Series {
            name: "sampled".into(),
            points: left.iter().copied().zip(density.iter().copied()).collect(),
            style: Style::Bars,
        },
        Series {
            name: "normal".into(),
            points: mid
                .map(|x| (x, (-x * x / (2.0 * variance)).exp() / norm))
                .collect(),
            style: Style::Line,
        },
    ];
    save(
        out,
        stem,
        render(stem, "(dS - <dS>)/eps", "density", &series, false, false),
    )
}
