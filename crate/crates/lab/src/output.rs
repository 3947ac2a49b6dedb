//! Result tables and their CSV / JSON encodings.
//!
//! Floats are written with `{:e}`, the shortest scientific form that parses
//! back to the same `f64`, so files are both exact and stable under diffing.
//! Column names and order form the on-disk schema; see [`SCHEMA_VERSION`].

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use echo_core::analysis::{Column, DecayFit, FidelitySeries, SemiclassicalColumns};
use echo_core::cmap::ActionHistogram;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::config::Format;

/// Bumped whenever a column is renamed, removed or reordered.
pub const SCHEMA_VERSION: u32 = 1;

pub const EXACT_COLUMNS: [&str; 3] = ["t", "M", "M_err"];
pub const SEMICLASSICAL_COLUMNS: [&str; 6] = ["Ma", "Ma_err", "Msc", "Msc_err", "Mf", "Mf_err"];
pub const HISTOGRAM_COLUMNS: [&str; 4] = ["bin_left", "bin_right", "density", "count"];
pub const RATE_COLUMNS: [&str; 12] = [
    "sigma",
    "epsilon",
    "steps",
    "gamma",
    "intercept",
    "t_lo",
    "t_hi",
    "points",
    "residual_rms",
    "r_squared",
    "fgr",
    "lyapunov",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
}

impl Cell {
    fn render(&self, out: &mut String) {
        match self {
            Cell::Int(v) => write!(out, "{v}"),
            Cell::Float(v) => write!(out, "{v:e}"),
        }
        .expect("writing to a String cannot fail");
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match *self {
            Cell::Int(v) => s.serialize_u64(v),
            // JSON has no NaN or infinity
            Cell::Float(v) if !v.is_finite() => s.serialize_none(),
            Cell::Float(v) => s.serialize_f64(v),
        }
    }
}

/// A rectangular table with named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Serialize for Table {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Table", 3)?;
        st.serialize_field("schema_version", &SCHEMA_VERSION)?;
        st.serialize_field("columns", &self.columns)?;
        st.serialize_field("rows", &self.rows)?;
        st.end()
    }
}

impl Table {
    fn with_columns<'a>(columns: impl IntoIterator<Item = &'a str>) -> Self {
        Self {
            columns: columns.into_iter().map(String::from).collect(),
            rows: Vec::new(),
        }
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(
            self.rows
                .iter()
                .map(|r| match r[i] {
                    Cell::Int(v) => v as f64,
                    Cell::Float(v) => v,
                })
                .collect(),
        )
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.columns)?;
        let mut buf = String::new();
        let mut fields = Vec::with_capacity(self.columns.len());
        for row in &self.rows {
            fields.clear();
            for cell in row {
                buf.clear();
                cell.render(&mut buf);
                fields.push(buf.clone());
            }
            w.write_record(&fields)?;
        }
        w.into_inner().context("flushing CSV")
    }

    pub fn to_json(&self) -> Result<Vec<u8>> {
        let mut v = serde_json::to_vec_pretty(self)?;
        v.push(b'\n');
        Ok(v)
    }

    /// Writes `<dir>/<stem>.<ext>` for each format and returns the paths.
    pub fn write(&self, dir: &Path, stem: &str, formats: &[Format]) -> Result<Vec<PathBuf>> {
        formats
            .iter()
            .map(|f| {
                let (bytes, ext) = match f {
                    Format::Csv => (self.to_csv()?, "csv"),
                    Format::Json => (self.to_json()?, "json"),
                };
                let path = dir.join(format!("{stem}.{ext}"));
                write_file(&path, &bytes)?;
                Ok(path)
            })
            .collect()
    }
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut f =
        std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    f.write_all(bytes)
        .with_context(|| format!("writing {}", path.display()))
}

fn push_pair(row: &mut Vec<Cell>, col: &Column, t: usize) {
    row.push(Cell::Float(col.values[t]));
    row.push(Cell::Float(col.errors[t]));
}

fn push_semiclassical(row: &mut Vec<Cell>, sc: &SemiclassicalColumns, t: usize) {
    push_pair(row, &sc.mean_part, t);
    push_pair(row, &sc.full, t);
    push_pair(row, &sc.fluctuating, t);
}

/// `t, M, M_err[, Ma, Ma_err, Msc, Msc_err, Mf, Mf_err]`, or
/// `t, Ma, ..., Mf_err` when only the semiclassical parts were computed.
pub fn fidelity_table(series: &FidelitySeries) -> Table {
    let mut columns = vec!["t"];
    if series.exact.is_some() {
        columns.extend(&EXACT_COLUMNS[1..]);
    }
    if series.semiclassical.is_some() {
        columns.extend(SEMICLASSICAL_COLUMNS);
    }
    let mut table = Table::with_columns(columns);
    for t in 0..series.len() {
        let mut row = vec![Cell::Int(t as u64)];
        if let Some(col) = &series.exact {
            push_pair(&mut row, col, t);
        }
        if let Some(sc) = &series.semiclassical {
            push_semiclassical(&mut row, sc, t);
        }
        table.rows.push(row);
    }
    table
}

/// `bin_left, bin_right, density, count`.
pub fn histogram_table(hist: &ActionHistogram) -> Table {
    let mut table = Table::with_columns(HISTOGRAM_COLUMNS);
    for ((w, d), &c) in hist.edges.windows(2).zip(hist.density()).zip(&hist.counts) {
        table.rows.push(vec![
            Cell::Float(w[0]),
            Cell::Float(w[1]),
            Cell::Float(d),
            Cell::Int(c),
        ]);
    }
    table
}

/// One fitted point of a rate sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct RatePoint {
    pub sigma: f64,
    pub epsilon: f64,
    pub steps: usize,
    pub fit: Option<DecayFit>,
    pub fgr: f64,
    pub lyapunov: f64,
}

/// One row per `σ`; fit columns are `NaN` where no window could be found.
pub fn rate_table(points: &[RatePoint]) -> Table {
    let mut table = Table::with_columns(RATE_COLUMNS);
    for p in points {
        let f = p.fit.as_ref();
        let fl = |g: fn(&DecayFit) -> f64| Cell::Float(f.map_or(f64::NAN, g));
        let int = |g: fn(&DecayFit) -> usize| Cell::Int(f.map_or(0, |f| g(f) as u64));
        table.rows.push(vec![
            Cell::Float(p.sigma),
            Cell::Float(p.epsilon),
            Cell::Int(p.steps as u64),
            fl(|f| f.gamma),
            fl(|f| f.intercept),
            int(|f| f.t_lo),
            int(|f| f.t_hi),
            int(|f| f.points),
            fl(|f| f.residual_rms),
            fl(|f| f.r_squared),
            Cell::Float(p.fgr),
            Cell::Float(p.lyapunov),
        ]);
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_through_csv() {
        let xs = [0.1, 1.0 / 3.0, 2.5e-300, -7.0, 1e21];
        let table = Table {
            columns: vec!["x".into()],
            rows: xs.iter().map(|&x| vec![Cell::Float(x)]).collect(),
        };
        let text = String::from_utf8(table.to_csv().unwrap()).unwrap();
        let back: Vec<f64> = text.lines().skip(1).map(|l| l.parse().unwrap()).collect();
        assert_eq!(back, xs);
        assert!(text.starts_with("x\n1e-1\n"));
    }

    #[test]
    fn non_finite_is_null_in_json() {
        let table = Table {
            columns: vec!["a".into(), "b".into()],
            rows: vec![vec![Cell::Float(f64::NAN), Cell::Int(3)]],
        };
        let v: serde_json::Value = serde_json::from_slice(&table.to_json().unwrap()).unwrap();
        assert_eq!(v["rows"][0][0], serde_json::Value::Null);
        assert_eq!(v["rows"][0][1], 3);
        assert_eq!(v["schema_version"], SCHEMA_VERSION);
    }
}
