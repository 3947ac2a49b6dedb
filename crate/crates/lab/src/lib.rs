//! Experiment runner for Loschmidt-echo studies of the sawtooth map.
//!
//! [`echo_core`] does the physics; this crate adds what needs `std`: thread
//! pools, a faster FFT backend, configuration files, the presets, CSV/JSON
//! tables, SVG plots and the run manifest.

pub mod config;
pub mod fft;
pub mod output;
pub mod parallel;
pub mod plot;
pub mod presets;
pub mod runner;

pub use config::ExperimentConfig;
pub use presets::Preset;
pub use runner::{run, Manifest, RunOptions};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "ECHO_LAB_THREADS";
