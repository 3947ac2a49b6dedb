use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(&'static str),
    #[error("{what} must be finite, got {value}")]
    NonFinite { what: &'static str, value: f64 },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },
    #[error("outside domain: {0}")]
    Domain(&'static str),
    #[error("degenerate binning: {0}")]
    Binning(&'static str),
    #[error("fit needs at least {needed} points inside the window, found {found} (window t={t_lo}..={t_hi})")]
    Fit {
        needed: usize,
        found: usize,
        t_lo: usize,
        t_hi: usize,
    },
    #[error("degenerate sample: {0}")]
    Degenerate(&'static str),
}

pub(crate) fn finite(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { what, value })
    }
}
