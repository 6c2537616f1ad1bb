use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::Trajectory;
use crate::linalg::solve_dense;

use super::{CandidateFamily, SimplexWeights};

/// Euclidean projection onto the probability simplex (sort-based).
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut css = 0.0;
    let mut theta = 0.0;
    for (j, &uj) in u.iter().enumerate() {
        css += uj;
        let t = (css - 1.0) / (j + 1) as f64;
        if uj - t > 0.0 {
            theta = t;
        }
    }
    let mut out: Vec<f64> = v.iter().map(|x| (x - theta).max(0.0)).collect();
    // large steps cancel against theta; restore the unit sum lost to rounding
    let s: f64 = out.iter().sum();
    if s > 0.0 {
        out.iter_mut().for_each(|x| *x /= s);
    }
    out
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `||lambda - P(lambda - grad J(lambda))||`, zero exactly at minimizers.
pub fn kkt_residual(family: &CandidateFamily, lambda: &[f64]) -> f64 {
    let g = family.gradient(lambda);
    let step: Vec<f64> = lambda.iter().zip(&g).map(|(l, d)| l - d).collect();
    let p = project_simplex(&step);
    norm(&lambda.iter().zip(&p).map(|(a, b)| a - b).collect::<Vec<_>>())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelectOptions {
    #[serde(default = "d_iter")]
    pub max_iter: usize,
    #[serde(default = "d_tol")]
    pub kkt_tol: f64,
    /// Starting weights; uniform by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<Vec<f64>>,
}

fn d_iter() -> usize {
    10_000
}
fn d_tol() -> f64 {
    1e-8
}

impl Default for SelectOptions {
    fn default() -> Self {
        SelectOptions { max_iter: d_iter(), kkt_tol: d_tol(), start: None }
    }
}

/// Optimizer output: the weights are a witness, the mixed trajectory is the result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    pub lambda: SimplexWeights,
    pub objective: f64,
    pub kkt_residual: f64,
    pub member_ids: Vec<String>,
    pub iterations: usize,
    /// Objective after each accepted step, starting with the initial point.
    pub objective_history: Vec<f64>,
    pub vertex_objectives: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate_ref: Option<String>,
}

#[derive(Clone, Debug)]
pub struct Selected {
    pub selection: Selection,
    pub trajectory: Trajectory,
}

/// Minimizes `J` over the simplex by projected gradient (Barzilai-Borwein steps,
/// Armijo backtracking) followed by an exact solve on the active face.
pub fn select(family: &CandidateFamily, opts: &SelectOptions) -> Result<Selected> {
    let m = family.len();
    if m == 0 {
        return Err(Error::EmptyFamily);
    }
    let mut lambda = match &opts.start {
        Some(s) => SimplexWeights::new(s.clone())?.into_vec(),
        None => vec![1.0 / m as f64; m],
    };
    let trace: f64 = (0..m).map(|i| family.integrated_gram()[i][i]).sum();
    // the gradient's Lipschitz constant is at most trace(Gbar) / 2
    let lip = (0.5 * trace).max(f64::MIN_POSITIVE);
    let mut alpha = 1.0 / lip;
    let mut j = family.objective(&lambda);
    let mut grad = family.gradient(&lambda);
    let mut history = vec![j];
    let mut iterations = 0;
    while iterations < opts.max_iter {
        if kkt_residual(family, &lambda) <= opts.kkt_tol {
            break;
        }
        iterations += 1;
        let mut a = alpha;
        let mut accepted = None;
        for _ in 0..60 {
            let trial = project_simplex(&lambda.iter().zip(&grad).map(|(l, g)| l - a * g).collect::<Vec<_>>());
            let s: Vec<f64> = trial.iter().zip(&lambda).map(|(x, y)| x - y).collect();
            let jt = family.objective(&trial);
            if jt <= j + 1e-4 * dot(&grad, &s) {
                accepted = Some((trial, s, jt));
                break;
            }
            a *= 0.5;
        }
        let Some((trial, s, jt)) = accepted else { break };
        let g_new = family.gradient(&trial);
        let y: Vec<f64> = g_new.iter().zip(&grad).map(|(x, y)| x - y).collect();
        let sy = dot(&s, &y);
        alpha = if sy > 0.0 { (dot(&s, &s) / sy).clamp(1e-6 / lip, 1e6 / lip) } else { 1.0 / lip };
        lambda = trial;
        grad = g_new;
        j = jt;
        history.push(j);
    }
    if let Some(face) = refine_on_face(family, &lambda) {
        let jf = family.objective(&face);
        if jf <= j && kkt_residual(family, &face) <= kkt_residual(family, &lambda) {
            lambda = face;
            j = jf;
            history.push(j);
        }
    }
    let selection = Selection {
        kkt_residual: kkt_residual(family, &lambda),
        lambda: SimplexWeights::new(lambda)?,
        objective: j,
        member_ids: family.ids().to_vec(),
        iterations,
        objective_history: history,
        vertex_objectives: family.vertex_objectives(),
        certificate_ref: None,
    };
    if !(selection.kkt_residual <= opts.kkt_tol) {
        return Err(Error::SelectionNotConverged(Box::new(selection)));
    }
    let trajectory = family.mix(&selection.lambda)?;
    Ok(Selected { selection, trajectory })
}

/// Minimizer of `J` on the affine hull of the current support. While that point is
/// infeasible the most negative index leaves the support.
fn refine_on_face(family: &CandidateFamily, lambda: &[f64]) -> Option<Vec<f64>> {
    let mut support: Vec<usize> = (0..lambda.len()).filter(|&i| lambda[i] > 1e-12).collect();
    let g = family.integrated_gram();
    let x = loop {
        let k = support.len();
        if k < 2 {
            return None;
        }
        // [G_SS/2  1; 1^T  0] [x; mu] = [0; 1]
        let mut a = vec![vec![0.0; k + 1]; k + 1];
        for (r, &i) in support.iter().enumerate() {
            for (c, &j) in support.iter().enumerate() {
                a[r][c] = 0.5 * g[i][j];
            }
            a[r][k] = 1.0;
            a[k][r] = 1.0;
        }
        let mut b = vec![0.0; k + 1];
        b[k] = 1.0;
        let x = solve_dense(&a, &b)?;
        if x[..k].iter().any(|v| !v.is_finite()) {
            return None;
        }
        let (worst, &low) = x[..k].iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).expect("k >= 2");
        if low >= 0.0 {
            break x;
        }
        support.remove(worst);
    };
    let mut out = vec![0.0; lambda.len()];
    for (r, &i) in support.iter().enumerate() {
        out[i] = x[r];
    }
    let s: f64 = out.iter().sum();
    Some(out.iter().map(|v| v / s).collect())
}

#[cfg(test)]
mod tests {
    use super::project_simplex;

    #[test]
    fn projection_keeps_unit_sum_after_large_steps() {
        let p = project_simplex(&[1.3e5 + 0.1, 1.3e5 + 0.3, 1.3e5 - 7.0]);
        assert!((p.iter().sum::<f64>() - 1.0).abs() <= 1e-15);
        assert!(p.iter().all(|&x| x >= 0.0));
        assert_eq!(p[2], 0.0);
    }
}
