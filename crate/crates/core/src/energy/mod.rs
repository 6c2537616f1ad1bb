//! Relative energy, relative dissipation, regularity weights and the residual
//! of a test trajectory.
//!
//! The energy is `E(u) = ||u||^2 / 2`, so its derivative is the identity and
//! the relative energy is `R(u | v) = ||u - v||^2 / 2`.

mod functional;
mod gronwall;
mod residual;
mod weight;

pub use functional::{energy, rel_dissipation, rel_energy, trilinear};
pub use gronwall::{cumulative_integral, cumulative_trapezoid, gronwall_factor, GronwallWeights};
pub use residual::{nonsolenoidal_correction, residual_a, residual_from_state, ResidualOptions};
pub use weight::{euler_negsym_weight, serrin_weight, AutoTag, GnConstant, SerrinExponents, WeightSpec, C_GN_AUTO};
