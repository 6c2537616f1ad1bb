use rayon::prelude::*;

use crate::energy::cumulative_integral;
use crate::error::{Error, Result};
use crate::flow::Trajectory;

use super::SimplexWeights;

/// Candidate trajectories for the same data on a common grid and sample times,
/// with their time-dependent Gram matrices.
#[derive(Clone, Debug)]
pub struct CandidateFamily {
    ids: Vec<String>,
    members: Vec<Trajectory>,
    /// `gram[k][i][j] = <u_i(t_k), u_j(t_k)>`
    gram: Vec<Vec<Vec<f64>>>,
    /// `int_0^T G(t) dt`
    integrated: Vec<Vec<f64>>,
}

/// Restricts a trajectory to the sample times `times`, which must be among its own.
fn at_times(u: &Trajectory, times: &[f64]) -> Result<Trajectory> {
    let idx = times
        .iter()
        .map(|&t| {
            u.index_of_time(t)
                .ok_or_else(|| Error::IncompatibleFamily(format!("member has no sample at t = {t}")))
        })
        .collect::<Result<Vec<_>>>()?;
    if idx.iter().enumerate().all(|(k, &i)| i == k) && idx.len() == u.len() {
        return Ok(u.clone());
    }
    let stride = if idx.len() > 1 { u.stride * (idx[1] - idx[0]) } else { u.stride };
    Trajectory::from_states(
        u.spec.clone(),
        times.to_vec(),
        idx.iter().map(|&i| u.states[i].clone()).collect(),
        stride,
        u.provenance.clone(),
    )
}

/// Builds a family from named trajectories of the same data.
///
/// Members are resampled to `common_n` (default: the finest member grid) and
/// restricted to `common_times` (default: the coarsest member sample grid).
/// Initial states must agree after truncation to the coarsest member grid.
pub fn assemble_family(
    trajs: Vec<(String, Trajectory)>,
    common_n: Option<usize>,
    common_times: Option<Vec<f64>>,
) -> Result<CandidateFamily> {
    build(trajs, common_n, common_times, true)
}

/// Like [`assemble_family`] but without the same-data checks: the convex hull of
/// arbitrary trajectories, for studying the optimizer itself.
pub fn assemble_hull(
    trajs: Vec<(String, Trajectory)>,
    common_n: Option<usize>,
    common_times: Option<Vec<f64>>,
) -> Result<CandidateFamily> {
    build(trajs, common_n, common_times, false)
}

fn build(
    trajs: Vec<(String, Trajectory)>,
    common_n: Option<usize>,
    common_times: Option<Vec<f64>>,
    same_data: bool,
) -> Result<CandidateFamily> {
    let (first_id, first) = trajs.first().ok_or(Error::EmptyFamily)?;
    for (id, t) in &trajs {
        if t.is_empty() {
            return Err(Error::EmptyTrajectory);
        }
        if same_data && !t.spec.same_data(&first.spec) {
            return Err(Error::IncompatibleFamily(format!("{id} and {first_id} have different nu, forcing or horizon")));
        }
    }
    for (i, (id, _)) in trajs.iter().enumerate() {
        if trajs[..i].iter().any(|(o, _)| o == id) {
            return Err(Error::IncompatibleFamily(format!("duplicate member id {id}")));
        }
    }
    let n_min = trajs.iter().map(|(_, t)| t.n()).min().expect("nonempty");
    let u0 = first.states[0].resample(n_min)?;
    let scale = u0.max_abs_coeff().max(1e-300);
    for (id, t) in trajs[1..].iter().filter(|_| same_data) {
        let d = t.states[0].resample(n_min)?.max_coeff_diff(&u0)?;
        if d > 1e-10 * scale {
            return Err(Error::IncompatibleFamily(format!(
                "initial state of {id} differs from {first_id} by {d:.3e} on the n = {n_min} grid"
            )));
        }
    }
    let n = common_n.unwrap_or_else(|| trajs.iter().map(|(_, t)| t.n()).max().expect("nonempty"));
    let times = match common_times {
        Some(t) => t,
        None => trajs
            .iter()
            .max_by(|a, b| a.1.sample_dt().total_cmp(&b.1.sample_dt()))
            .map(|(_, t)| t.times.clone())
            .expect("nonempty"),
    };
    let (ids, members): (Vec<String>, Vec<Trajectory>) = trajs
        .into_iter()
        .map(|(id, t)| {
            let t = if t.n() == n { t } else { t.resample(n)? };
            Ok((id, at_times(&t, &times)?))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .unzip();
    let m = members.len();
    let gram: Vec<Vec<Vec<f64>>> = (0..times.len())
        .into_par_iter()
        .map(|k| {
            let mut g = vec![vec![0.0; m]; m];
            for i in 0..m {
                for j in i..m {
                    let v = members[i].states[k].inner(&members[j].states[k])?;
                    g[i][j] = v;
                    g[j][i] = v;
                }
            }
            Ok(g)
        })
        .collect::<Result<Vec<_>>>()?;
    let h = members[0].sample_dt();
    let integrated = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let series: Vec<f64> = gram.iter().map(|g| g[i][j]).collect();
                    *cumulative_integral(&series, h).last().expect("nonempty")
                })
                .collect()
        })
        .collect();
    Ok(CandidateFamily { ids, members, gram, integrated })
}

impl CandidateFamily {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn members(&self) -> &[Trajectory] {
        &self.members
    }

    pub fn times(&self) -> &[f64] {
        &self.members[0].times
    }

    /// Gram matrix at the `k`-th common sample.
    pub fn gram(&self, k: usize) -> &[Vec<f64>] {
        &self.gram[k]
    }

    /// `int_0^T G(t) dt`
    pub fn integrated_gram(&self) -> &[Vec<f64>] {
        &self.integrated
    }

    /// `J(lambda) = 1/2 int E(sum_i lambda_i u_i) dt = lambda^T Gbar lambda / 4`.
    pub fn objective(&self, lambda: &[f64]) -> f64 {
        let g = &self.integrated;
        0.25 * (0..lambda.len())
            .map(|i| lambda[i] * (0..lambda.len()).map(|j| g[i][j] * lambda[j]).sum::<f64>())
            .sum::<f64>()
    }

    pub fn gradient(&self, lambda: &[f64]) -> Vec<f64> {
        self.integrated
            .iter()
            .map(|row| 0.5 * row.iter().zip(lambda).map(|(g, l)| g * l).sum::<f64>())
            .collect()
    }

    pub fn vertex_objectives(&self) -> Vec<f64> {
        (0..self.len()).map(|i| 0.25 * self.integrated[i][i]).collect()
    }

    /// The trajectory `sum_i lambda_i u_i`.
    pub fn mix(&self, lambda: &SimplexWeights) -> Result<Trajectory> {
        if lambda.len() != self.len() {
            return Err(Error::ShapeMismatch(format!("{} weights for {} members", lambda.len(), self.len())));
        }
        let refs: Vec<&Trajectory> = self.members.iter().collect();
        let mut t = Trajectory::combine(lambda.as_slice(), &refs)?;
        t.provenance = format!("mixture of [{}]", self.ids.join(", "));
        Ok(t)
    }
}
