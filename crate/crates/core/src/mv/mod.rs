//! Measure-valued solutions of the Euler equations: a velocity trajectory paired
//! with a symmetric positive semidefinite Reynolds-type defect `m`.

mod defect;
mod equation;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::flow::{solve, SystemSpec, Trajectory};
use crate::selector::{assemble_hull, select, SelectOptions, Selection, SimplexWeights};

pub use defect::{defect_from_pair, ClipReport, DefectField, DefectOptions};
pub use equation::{mv_energy_margin, mv_energy_margins, mv_equation_residual, MvTest};

use defect::outer_samples;

/// `sum_i l_i v_i` with `sum_i l_i m_i + 1/2 sum_ij l_i l_j (v_i - v_j) (x) (v_i - v_j)`,
/// which keeps the flux `v (x) v + m` affine in the weights.
pub fn mv_mixture(lambda: &SimplexWeights, pairs: &[(&Trajectory, &DefectField)]) -> Result<(Trajectory, DefectField)> {
    if pairs.len() != lambda.len() {
        return Err(Error::ShapeMismatch(format!("{} weights for {} members", lambda.len(), pairs.len())));
    }
    let l = lambda.as_slice();
    let first = pairs[0].0;
    for (v, m) in pairs {
        if v.n() != first.n() || m.velocity_n() != first.n() || v.times != first.times {
            return Err(Error::IncompatibleFamily("pairs must share grid and sample times".into()));
        }
    }
    let vs: Vec<&Trajectory> = pairs.iter().map(|p| p.0).collect();
    let ms: Vec<&DefectField> = pairs.iter().map(|p| p.1).collect();
    let v = Trajectory::combine(l, &vs)?;
    let len = 4 * first.n() * first.n();
    let extra = (0..first.len())
        .into_par_iter()
        .map(|k| {
            let mut acc = [vec![0.0; len], vec![0.0; len], vec![0.0; len]];
            for i in 0..vs.len() {
                for j in i + 1..vs.len() {
                    let w = l[i] * l[j];
                    if w == 0.0 {
                        continue;
                    }
                    let d = outer_samples(&vs[i].states[k].axpy(-1.0, &vs[j].states[k])?);
                    for c in 0..3 {
                        acc[c].iter_mut().zip(&d[c]).for_each(|(a, x)| *a += w * x);
                    }
                }
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    let m = DefectField::combine(l, &ms, extra)?;
    Ok((v, m))
}

/// `(lambda v1 + (1 - lambda) v2, lambda m1 + (1 - lambda) m2 + lambda (1 - lambda) (v1 - v2) (x) (v1 - v2))`
pub fn mv_convex_combine(
    v1: &Trajectory,
    m1: &DefectField,
    v2: &Trajectory,
    m2: &DefectField,
    lambda: f64,
) -> Result<(Trajectory, DefectField)> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidLambda(lambda));
    }
    mv_mixture(&SimplexWeights::new(vec![lambda, 1.0 - lambda])?, &[(v1, m1), (v2, m2)])
}

#[derive(Clone, Debug)]
pub struct MvSelection {
    pub selection: Selection,
    pub velocity: Trajectory,
    pub defect: DefectField,
}

/// Minimizes the velocity objective over mixtures of measure-valued pairs; the
/// defect of the minimizer follows from [`mv_mixture`] and plays no part in the objective.
pub fn mv_select(family: &[(String, Trajectory, DefectField)], opts: &SelectOptions) -> Result<MvSelection> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let hull = assemble_hull(family.iter().map(|(id, v, _)| (id.clone(), v.clone())).collect(), None, None)?;
    let sel = select(&hull, opts)?;
    let pairs: Vec<(&Trajectory, &DefectField)> = family.iter().map(|(_, v, m)| (v, m)).collect();
    let (velocity, defect) = mv_mixture(&sel.selection.lambda, &pairs)?;
    Ok(MvSelection { selection: sel.selection, velocity, defect })
}

/// Runs the same data at each viscosity (largest first), sampled every `stride` steps.
pub fn vanishing_viscosity_ladder(
    base: &SystemSpec,
    u0: &SpectralField,
    nus: &[f64],
    stride: usize,
) -> Result<Vec<(String, Trajectory)>> {
    nus.par_iter()
        .map(|&nu| {
            let spec = SystemSpec { nu, ..base.clone() };
            Ok((format!("nu{nu}"), solve(&spec, u0, stride)?))
        })
        .collect()
}
