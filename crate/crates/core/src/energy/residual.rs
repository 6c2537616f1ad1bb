use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::field::SpectralField;
use crate::flow::{SystemSpec, TestTrajectory};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResidualOptions {
    /// Leray-project the residual (drops the pressure gradient of the test trajectory).
    #[serde(default = "yes")]
    pub projected: bool,
    /// Test against `P v` and add the correction term for non-solenoidal test trajectories.
    #[serde(default)]
    pub nonsolenoidal_correction: bool,
}

fn yes() -> bool {
    true
}

impl Default for ResidualOptions {
    fn default() -> Self {
        ResidualOptions { projected: true, nonsolenoidal_correction: false }
    }
}

/// `A = d_t v + (v.grad)v - nu lap v - f` from an evaluated test state.
pub fn residual_from_state(
    v: &SpectralField,
    dvdt: &SpectralField,
    nu: f64,
    f: &SpectralField,
    opts: ResidualOptions,
) -> Result<SpectralField> {
    let a = dvdt.axpy(1.0, &v.convect(v)?)?.axpy(-nu, &v.laplacian())?.axpy(-1.0, f)?;
    Ok(if opts.projected { a.leray_project() } else { a })
}

/// Residual `A(v)(t)` of a test trajectory in the equations described by `spec`.
pub fn residual_a(vt: &TestTrajectory, t: f64, spec: &SystemSpec, opts: ResidualOptions) -> Result<SpectralField> {
    let (v, dv) = vt.eval(t, spec.grid)?;
    let f = spec.forcing.resolve(spec.grid)?.eval(t);
    residual_from_state(&v, &dv, spec.nu, &f, opts)
}

/// `int ((v - Pv).grad) v . (u - Pv) + int ((Pv).grad)(v - Pv) . (u - Pv)`; zero for solenoidal `v`.
pub fn nonsolenoidal_correction(v: &SpectralField, u: &SpectralField) -> Result<f64> {
    let pv = v.leray_project();
    let q = v.axpy(-1.0, &pv)?;
    let w = u.axpy(-1.0, &pv)?;
    Ok(q.convect(v)?.inner(&w)? + pv.convect(&q)?.inner(&w)?)
}
