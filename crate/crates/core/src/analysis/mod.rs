//! Series containers, decay-rate fits and distribution diagnostics.

mod fit;
mod gaussianity;

use alloc::vec::Vec;

pub use fit::{fgr_rate, fit_decay_rate, fit_decay_rate_weighted, plateau, DecayFit, Window};
pub use gaussianity::{
    gaussianity_metrics, gaussianity_of_samples, normal_cdf, Gaussianity,
    MIN_SAMPLES as MIN_GAUSSIANITY_SAMPLES,
};

use crate::error::{Error, Result};
use crate::params::MapParams;
use crate::qmap::{Ensemble, InitialState};
use crate::stats::column_mean_and_error;

/// A per-step quantity with its standard error.
#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
}

impl Column {
    pub fn new(values: Vec<f64>, errors: Vec<f64>) -> Self {
        assert_eq!(
            values.len(),
            errors.len(),
            "values and errors differ in length"
        );
        Self { values, errors }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnsembleInfo {
    pub initial: InitialState,
    pub count: usize,
    pub seed: u64,
}

/// Semiclassical mean-value, full and fluctuating parts on one trajectory set.
#[derive(Debug, Clone, PartialEq)]
pub struct SemiclassicalColumns {
    /// `M̄_a = |mean m|²`
    pub mean_part: Column,
    /// `M̄_sc = mean |m|²`
    pub full: Column,
    /// `M̄_f = M̄_sc - M̄_a`
    pub fluctuating: Column,
    pub ensemble: EnsembleInfo,
    pub p0_grid: usize,
}

/// Fidelity columns over `t = 0..=steps` for one parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelitySeries {
    pub params: MapParams,
    pub steps: usize,
    pub exact: Option<Column>,
    pub ensemble: Option<EnsembleInfo>,
    pub semiclassical: Option<SemiclassicalColumns>,
    /// Some Gaussian initial state overlapped its periodic image.
    pub wrap_warning: bool,
}

impl FidelitySeries {
    pub fn new(params: MapParams, steps: usize) -> Self {
        Self {
            params,
            steps,
            exact: None,
            ensemble: None,
            semiclassical: None,
            wrap_warning: false,
        }
    }

    /// Mean and standard error over member traces given in member order.
    pub fn from_exact_members<S: AsRef<[f64]>>(
        params: MapParams,
        ensemble: &Ensemble,
        members: &[S],
    ) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::Input("no ensemble members to average"));
        }
        let (mean, err) = column_mean_and_error(members);
        if mean.is_empty() {
            return Err(Error::Input("member traces are empty"));
        }
        let mut series = Self::new(params, mean.len() - 1);
        series.exact = Some(Column::new(mean, err));
        series.ensemble = Some(ensemble.info());
        series.wrap_warning = ensemble.wraps(&params)?;
        Ok(series)
    }

    pub fn with_semiclassical(mut self, sc: SemiclassicalColumns) -> Result<Self> {
        if sc.full.len() != self.steps + 1 {
            return Err(Error::Dimension {
                expected: self.steps + 1,
                found: sc.full.len(),
            });
        }
        self.semiclassical = Some(sc);
        Ok(self)
    }

    /// Number of rows, `steps + 1`.
    pub fn len(&self) -> usize {
        self.steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}
