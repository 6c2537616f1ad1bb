use crate::error::{Error, Result};
use crate::field::{sharp_lowpass, SpectralField};

use super::rhs::Stepper;
use super::spec::SystemSpec;
use super::trajectory::Trajectory;

/// Galerkin initial datum: resample onto the system grid, project, and restrict to the retained band.
pub fn project_initial(spec: &SystemSpec, v0: &SpectralField) -> Result<SpectralField> {
    if v0.components() != 2 {
        return Err(Error::ShapeMismatch("initial velocity must be a vector field".into()));
    }
    let v = v0.resample(spec.grid.n())?;
    let v = match spec.mode_cutoff() {
        Some(k) => sharp_lowpass(&v, k),
        None => v,
    };
    Ok(v.leray_project())
}

/// Integrates from 0 to `t_end`, keeping every `sample_stride`-th state.
pub fn solve(spec: &SystemSpec, v0: &SpectralField, sample_stride: usize) -> Result<Trajectory> {
    spec.validate()?;
    let steps = spec.steps();
    if sample_stride == 0 || steps % sample_stride != 0 {
        return Err(Error::InvalidSpec(format!("sample stride {sample_stride} does not divide {steps} steps")));
    }
    let stepper = Stepper::new(spec, spec.dt)?;
    let mut v = project_initial(spec, v0)?;
    let mut times = vec![0.0];
    let mut states = vec![v.clone()];
    let mut e_prev = 0.5 * v.l2_norm().powi(2);
    let mut max_inc = 0.0f64;
    for k in 0..steps {
        let t = k as f64 * spec.dt;
        v = stepper.step(&v, t)?;
        let e = 0.5 * v.l2_norm().powi(2);
        max_inc = max_inc.max(e - e_prev);
        e_prev = e;
        if (k + 1) % sample_stride == 0 {
            times.push((k + 1) as f64 * spec.dt);
            states.push(v.clone());
        }
    }
    let provenance = format!(
        "integrating-factor RK4, n = {}, dt = {}, nu = {}, dealias = {}, stride = {}",
        spec.grid.n(),
        spec.dt,
        spec.nu,
        spec.dealias,
        sample_stride
    );
    let mut traj = Trajectory::from_states(spec.clone(), times, states, sample_stride, provenance)?;
    traj.ledger.max_step_increase = max_inc;
    Ok(traj)
}
