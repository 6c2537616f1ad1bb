use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::certificate::{certify, CertificateConfig, CertificateReport, TestCase};
use crate::error::{Error, Result};

use super::{CandidateFamily, SimplexWeights};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvexityPlan {
    /// Points of the `s u_i + (1 - s) u_j` sweep per pair, endpoints included.
    #[serde(default = "d_sweep")]
    pub sweep_points: usize,
    /// Additional random convex combinations of all members.
    #[serde(default)]
    pub random_samples: usize,
    #[serde(default)]
    pub seed: u64,
}

fn d_sweep() -> usize {
    11
}

impl Default for ConvexityPlan {
    fn default() -> Self {
        ConvexityPlan { sweep_points: d_sweep(), random_samples: 0, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexityCheck {
    pub lambda: Vec<f64>,
    pub min_margin: f64,
    /// Smallest `margin + budget`, the budget being the sum of the members' tolerances.
    pub min_slack: f64,
    pub passes: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub member_verdicts: Vec<bool>,
    pub member_min_margins: Vec<f64>,
    pub checks: Vec<ConvexityCheck>,
    pub failures: usize,
}

impl ConvexityReport {
    pub fn all_pass(&self) -> bool {
        self.failures == 0
    }
}

fn check(
    family: &CandidateFamily,
    lambda: Vec<f64>,
    tests: &[TestCase],
    cfg: &CertificateConfig,
    members: &[CertificateReport],
) -> Result<ConvexityCheck> {
    let mixed = family.mix(&SimplexWeights::new(lambda.clone())?)?;
    let rep = certify(&mixed, tests, cfg)?;
    let mut errors: Vec<String> = rep.errors.iter().map(|e| format!("{}: {}", e.test_id, e.message)).collect();
    let mut min_margin = f64::INFINITY;
    let mut min_slack = f64::INFINITY;
    for (k, e) in rep.entries.iter().enumerate() {
        let mut budget = 0.0;
        for (i, m) in members.iter().enumerate() {
            if lambda[i] > 0.0 {
                match m.entries.get(k).filter(|x| x.test_id == e.test_id && x.t == e.t) {
                    Some(x) => budget += x.tol,
                    None => errors.push(format!("member {} has no entry for {} at t = {}", family.ids()[i], e.test_id, e.t)),
                }
            }
        }
        min_margin = min_margin.min(e.margin);
        min_slack = min_slack.min(e.margin + budget);
    }
    let passes = errors.is_empty() && min_slack >= 0.0;
    Ok(ConvexityCheck { lambda, min_margin, min_slack, passes, errors })
}

/// Certifies pairwise sweeps (midpoints included) and random convex combinations
/// of family members; each mixture must pass within the summed member budgets.
pub fn verify_convex_midpoint(
    family: &CandidateFamily,
    tests: &[TestCase],
    cfg: &CertificateConfig,
    plan: &ConvexityPlan,
) -> Result<ConvexityReport> {
    let m = family.len();
    if m < 2 {
        return Err(Error::IncompatibleFamily("convexity checks need at least two members".into()));
    }
    let members = family
        .members()
        .iter()
        .map(|u| certify(u, tests, cfg))
        .collect::<Result<Vec<_>>>()?;
    let mut lambdas = Vec::new();
    let pts = plan.sweep_points.max(2);
    for i in 0..m {
        for j in i + 1..m {
            for p in 0..pts {
                let s = p as f64 / (pts - 1) as f64;
                let mut l = vec![0.0; m];
                l[i] = s;
                l[j] = 1.0 - s;
                lambdas.push(l);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    for _ in 0..plan.random_samples {
        // uniform on the simplex via normalized exponentials
        let e: Vec<f64> = (0..m).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
        let s: f64 = e.iter().sum();
        lambdas.push(e.iter().map(|x| x / s).collect());
    }
    let checks = lambdas
        .into_iter()
        .map(|l| check(family, l, tests, cfg, &members))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvexityReport {
        member_verdicts: members.iter().map(|r| r.verdict).collect(),
        member_min_margins: members.iter().map(|r| r.min_margin()).collect(),
        failures: checks.iter().filter(|c| !c.passes).count(),
        checks,
    })
}
