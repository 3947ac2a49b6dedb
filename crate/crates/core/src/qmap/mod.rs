//! Quantum sawtooth map on an `N`-level torus and its exact fidelity.
//!
//! One period is `U = exp(-i p̂²/2ħ) exp(i k (θ̂-π)²/2)`: a kick diagonal in
//! position followed by a free rotation diagonal in momentum. States live on
//! the grid `θ_j = 2πj/N`; momenta are `p_m = ħ m` with `m ∈ [-N/2, N/2)`
//! stored in DFT wraparound order. Boundary conditions are periodic in both
//! variables with no Floquet phases.

mod echo;
mod propagator;
mod state;

pub use echo::{ensemble_mean_fidelity, fidelity_series, Echo, Ensemble, InitialState};
pub use propagator::{evolve_step, Propagator};
pub use state::{GaussianPacket, QuantumState, Representation, WRAP_WARNING_THRESHOLD};
