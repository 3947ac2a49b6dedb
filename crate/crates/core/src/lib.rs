//! Exact and semiclassical Loschmidt echo of the kicked sawtooth map.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is a pure
//! function of its inputs: ensembles are described by a seed and a member
//! count, each member draws from its own counter-based stream, and every
//! reduction runs in member order. Callers that want parallelism evaluate the
//! per-member functions however they like and hand the results back to the
//! reducers in index order.
//!
//! Modules:
//!
//! * [`qmap`]: torus Hilbert space, split-operator propagation, exact fidelity.
//! * [`cmap`]: classical sawtooth orbits, first-order action differences,
//!   Lyapunov exponents, action diffusion constant.
//! * [`semiclassics`]: fidelity amplitude as a momentum average of action phases,
//!   split into mean-value and fluctuating parts.
//! * [`analysis`]: decay-rate fits, golden-rule rate, Gaussianity diagnostics.
#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]
// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod analysis;
pub mod cmap;
mod error;
pub mod fft;
pub mod params;
pub mod qmap;
pub mod semiclassics;
pub mod stats;
pub mod stream;

pub use error::{Error, Result};
pub use fft::{Fourier, Plan};
pub use num_complex::Complex64;
pub use params::MapParams;

/// Version of this crate, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
