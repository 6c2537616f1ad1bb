use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certificate::{weak_strong_gap, GapVariant};
use crate::energy::{cumulative_integral, rel_energy, WeightSpec};
use crate::error::{Error, Result};
use crate::field::{sharp_lowpass, SpectralField};
use crate::flow::{Forcing, SystemSpec, TestTrajectory, Trajectory};

use super::{assemble_family, select, SelectOptions};

/// Builds the named candidate trajectories for given data.
pub type FamilyBuilder<'a> = dyn Fn(&SystemSpec, &SpectralField) -> Result<Vec<(String, Trajectory)>> + Sync + 'a;

/// Direction of a data perturbation; the study scales it by each `delta`.
#[derive(Clone, Debug, Default)]
pub struct Perturbation {
    pub initial: Option<SpectralField>,
    pub forcing: Option<Forcing>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DependenceOptions {
    #[serde(default)]
    pub select: SelectOptions,
    /// Modes `max(|kx|, |ky|) <= weak_kmax` enter the weak distance.
    #[serde(default = "d_kmax")]
    pub weak_kmax: i64,
    /// Weight for the stability bound; no bound is evaluated when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound_weight: Option<WeightSpec>,
}

fn d_kmax() -> i64 {
    4
}

impl Default for DependenceOptions {
    fn default() -> Self {
        DependenceOptions { select: SelectOptions::default(), weak_kmax: d_kmax(), bound_weight: None }
    }
}

/// Final-time values of the stability estimate, discounted like certificate entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundSummary {
    pub holds: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub inflation: f64,
    pub log_gronwall: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DependenceRow {
    pub delta: f64,
    pub weak_distance: f64,
    pub max_rel_energy: f64,
    pub final_rel_energy: f64,
    pub objective: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<BoundSummary>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DependenceReport {
    pub rows: Vec<DependenceRow>,
    /// Weak distances decrease with `delta`.
    pub monotone: bool,
}

/// `(int_0^T ||P_k (a - b)||^2 dt)^{1/2}` with `P_k` the sharp low-pass at `kmax`.
pub fn weak_distance(a: &Trajectory, b: &Trajectory, kmax: i64) -> Result<f64> {
    if a.times.len() != b.times.len() || a.times.iter().zip(&b.times).any(|(x, y)| (x - y).abs() > 1e-12) {
        return Err(Error::ShapeMismatch("trajectories have different sample times".into()));
    }
    let d2 = a
        .states
        .iter()
        .zip(&b.states)
        .map(|(x, y)| Ok(sharp_lowpass(&x.axpy(-1.0, &y.resample(x.n())?)?, kmax).l2_norm().powi(2)))
        .collect::<Result<Vec<f64>>>()?;
    Ok(cumulative_integral(&d2, a.sample_dt()).last().copied().unwrap_or(0.0).max(0.0).sqrt())
}

fn perturbed(
    base: &SystemSpec,
    u0: &SpectralField,
    dir: &Perturbation,
    delta: f64,
) -> Result<(SystemSpec, SpectralField)> {
    let mut spec = base.clone();
    if let Some(g) = &dir.forcing {
        if delta != 0.0 {
            spec.forcing = base.forcing.plus(&g.scaled(delta));
        }
    }
    let v0 = match &dir.initial {
        Some(w) if delta != 0.0 => u0.axpy(delta, &w.resample(u0.n())?)?,
        _ => u0.clone(),
    };
    Ok((spec, v0))
}

/// Perturbs the data by `delta * dir` for each `delta`, selects from the family
/// the builder produces, and measures the distance to the unperturbed selection.
pub fn continuous_dependence_study(
    base: &SystemSpec,
    u0: &SpectralField,
    deltas: &[f64],
    dir: &Perturbation,
    builder: &FamilyBuilder,
    opts: &DependenceOptions,
) -> Result<DependenceReport> {
    if deltas.iter().any(|d| !(*d >= 0.0)) || deltas.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidSpec("deltas must be nonnegative and strictly decreasing".into()));
    }
    let run = |delta: f64| -> Result<(SystemSpec, Trajectory, f64)> {
        let (spec, v0) = perturbed(base, u0, dir, delta)?;
        let family = assemble_family(builder(&spec, &v0)?, None, None)?;
        let sel = select(&family, &opts.select)?;
        Ok((spec, sel.trajectory, sel.selection.objective))
    };
    let (_, reference, _) = run(0.0)?;
    let strong = match opts.bound_weight {
        Some(_) => Some(TestTrajectory::spline(&reference)?),
        None => None,
    };
    let rows = deltas
        .par_iter()
        .map(|&delta| {
            let (spec, u, objective) = run(delta)?;
            let u = if u.n() == reference.n() { u } else { u.resample(reference.n())? };
            let rel = u
                .states
                .iter()
                .zip(&reference.states)
                .map(|(a, b)| rel_energy(a, b))
                .collect::<Result<Vec<f64>>>()?;
            let bound = match (&opts.bound_weight, &strong) {
                (Some(w), Some(v)) => {
                    let variant = if base.nu > 0.0 { GapVariant::NavierStokes } else { GapVariant::Euler };
                    let g = weak_strong_gap(&u, v, &spec.forcing, &base.forcing, w, variant)?;
                    let last = g.entries.last().expect("nonempty");
                    Some(BoundSummary {
                        holds: g.holds,
                        lhs: last.lhs,
                        rhs: last.rhs,
                        inflation: last.inflation,
                        log_gronwall: last.log_gronwall,
                    })
                }
                _ => None,
            };
            Ok(DependenceRow {
                delta,
                weak_distance: weak_distance(&u, &reference, opts.weak_kmax)?,
                max_rel_energy: rel.iter().copied().fold(0.0, f64::max),
                final_rel_energy: *rel.last().expect("nonempty"),
                objective,
                bound,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let monotone = rows.windows(2).all(|w| w[1].weak_distance <= w[0].weak_distance);
    Ok(DependenceReport { rows, monotone })
}
