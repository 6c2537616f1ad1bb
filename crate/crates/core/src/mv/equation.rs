use rayon::prelude::*;

use crate::certificate::PhiWeight;
use crate::energy::cumulative_integral;
use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::flow::{Forcing, Trajectory};

use super::DefectField;

/// Separable test function `phi(t) psi(x)` with `phi(T) = 0`.
#[derive(Clone, Debug)]
pub struct MvTest {
    pub shape: SpectralField,
    pub weight: PhiWeight,
}

impl MvTest {
    pub fn new(shape: SpectralField, weight: PhiWeight) -> Self {
        MvTest { shape, weight }
    }
}

fn check_aligned(v: &Trajectory, m: &DefectField) -> Result<()> {
    if v.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    if v.times.len() != m.times().len() || v.times.iter().zip(m.times()).any(|(a, b)| (a - b).abs() > 1e-12) {
        return Err(Error::ShapeMismatch("defect and trajectory samples are not aligned".into()));
    }
    if v.n() > m.velocity_n() {
        return Err(Error::ShapeMismatch(format!("velocity grid {} is finer than the defect's {}", v.n(), m.velocity_n())));
    }
    Ok(())
}

/// Residual of the measure-valued equation for each test function:
///
/// `-int <v, d_t phi> - int (v (x) v + m) : grad phi - (v0, phi(0)) - int (f, phi)`
///
/// which vanishes for solutions of `d_t v + div(v (x) v + m) + grad p = f`.
/// Test shapes must be solenoidal unless `project_tests` replaces them by their
/// Leray projection.
pub fn mv_equation_residual(
    v: &Trajectory,
    m: &DefectField,
    f: &Forcing,
    tests: &[MvTest],
    project_tests: bool,
) -> Result<Vec<f64>> {
    check_aligned(v, m)?;
    let n = m.velocity_n();
    let grid = crate::field::Grid::new(n)?;
    let forcing = f.resolve(grid)?;
    let states = v.states.iter().map(|s| s.resample(n)).collect::<Result<Vec<_>>>()?;
    let h = v.sample_dt();
    let t_end = v.t_end();
    tests
        .par_iter()
        .map(|test| {
            test.weight.check(&v.times)?;
            let shape = test.shape.resample(n)?;
            let shape = if shape.clone().tag_solenoidal().is_solenoidal() {
                shape.tag_solenoidal()
            } else if project_tests {
                shape.leray_project()
            } else {
                return Err(Error::NotSolenoidal(shape.divergence_defect()));
            };
            let grad = shape.gradient().physical_on(2 * n)?;
            let density = states
                .iter()
                .enumerate()
                .map(|(k, s)| {
                    let (phi, dphi) = test.weight.eval(v.times[k], t_end);
                    let vv = -s.convect(s)?.inner(&shape)?;
                    let flux = vv + m.pair(k, &grad);
                    Ok(-dphi * s.inner(&shape)? - phi * flux - phi * forcing.eval(v.times[k]).inner(&shape)?)
                })
                .collect::<Result<Vec<f64>>>()?;
            let (phi0, _) = test.weight.eval(0.0, t_end);
            Ok(cumulative_integral(&density, h)[density.len() - 1] - phi0 * states[0].inner(&shape)?)
        })
        .collect()
}

/// `E(v0) + int_0^t <f, v> - E(v(t)) - <m(t), I> / 2` at every sample time.
pub fn mv_energy_margins(v: &Trajectory, m: &DefectField, f: &Forcing) -> Result<Vec<f64>> {
    check_aligned(v, m)?;
    let forcing = f.resolve(v.spec.grid)?;
    let power = v
        .times
        .iter()
        .zip(&v.states)
        .map(|(t, s)| if forcing.is_zero() { Ok(0.0) } else { forcing.eval(*t).inner(s) })
        .collect::<Result<Vec<f64>>>()?;
    let work = cumulative_integral(&power, v.sample_dt());
    let e = |s: &SpectralField| 0.5 * s.l2_norm().powi(2);
    let e0 = e(&v.states[0]);
    Ok((0..v.len()).map(|k| e0 + work[k] - e(&v.states[k]) - 0.5 * m.trace_mass(k)).collect())
}

/// The margin of [`mv_energy_margins`] at sample time `t`.
pub fn mv_energy_margin(v: &Trajectory, m: &DefectField, f: &Forcing, t: f64) -> Result<f64> {
    let k = v
        .index_of_time(t)
        .ok_or(Error::TimeOutOfRange { t, start: v.times[0], end: v.t_end() })?;
    Ok(mv_energy_margins(v, m, f)?[k])
}
