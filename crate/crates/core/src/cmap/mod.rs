//! Classical sawtooth map `p̄ = p + K(θ-π)`, `θ̄ = θ + p̄` (mod 2π).
//!
//! The perturbation potential entering the action difference is
//! `v(θ) = -(θ-π)²/2`, sampled at the angle entering each kick. With this
//! sign the phase-space mean of `ΔS/ε` after `t` kicks is `-π²t/6`.

mod diffusion;
mod histogram;
mod lyapunov;
mod orbit;

pub use diffusion::{action_diffusion_constant, action_diffusion_constant_of, Diffusion};
pub use histogram::{
    sample_action_distribution, sample_actions, ActionHistogram, Binning, CLIP_SIGMAS,
};
pub use lyapunov::{jacobian, lyapunov_analytic, lyapunov_numeric, LyapunovEstimate};
pub use orbit::{
    accumulate_action, classical_step, kick_potential, mean_action, step_with_action, wrap_angle,
    PhasePoint, MEAN_POTENTIAL,
};
