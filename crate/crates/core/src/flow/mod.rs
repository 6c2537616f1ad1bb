//! Galerkin Navier-Stokes / Euler integration on the torus.

mod galerkin;
mod initial;
mod pressure;
mod rhs;
mod solve;
mod spec;
mod taylor_green;
mod test_traj;
mod trajectory;

pub use galerkin::{canonical_modes, mode_count, truncate_modes, BasisPart};
pub use initial::{random_solenoidal, two_vortex, velocity_from_streamfunction, velocity_from_vorticity};
pub use pressure::recover_pressure;
pub use rhs::{advance, nse_rhs};
pub use solve::{project_initial, solve};
pub use spec::{Forcing, ForcingTerm, ResolvedForcing, SystemSpec};
pub use taylor_green::{
    forced_tg_amplitude, forced_tg_amplitude_rate, taylor_green, taylor_green_pressure, tg_shape,
};
pub use test_traj::{SplineTrajectory, TestTrajectory, TimeProfile};
pub use trajectory::{EnergyLedger, Trajectory};
