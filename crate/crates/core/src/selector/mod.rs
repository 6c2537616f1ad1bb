//! Selection of the maximal dissipative candidate: minimize
//! `J(lambda) = 1/2 int_0^T E(sum_i lambda_i u_i) dt` over the simplex spanned by
//! a family of candidate trajectories for the same data.

mod convexity;
mod dependence;
mod family;
mod optimize;
mod recipes;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use convexity::{verify_convex_midpoint, ConvexityCheck, ConvexityPlan, ConvexityReport};
pub use dependence::{
    continuous_dependence_study, weak_distance, BoundSummary, DependenceOptions, DependenceReport, DependenceRow,
    FamilyBuilder, Perturbation,
};
pub use family::{assemble_family, assemble_hull, CandidateFamily};
pub use optimize::{kkt_residual, project_simplex, select, SelectOptions, Selected, Selection};
pub use recipes::{build_candidates, CandidateRecipe};

/// Nonnegative weights summing to one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct SimplexWeights(Vec<f64>);

impl SimplexWeights {
    /// Accepts weights within `1e-12` of the simplex and projects them onto it exactly.
    pub fn new(lambda: Vec<f64>) -> Result<Self> {
        if lambda.is_empty() {
            return Err(Error::EmptyFamily);
        }
        if let Some(&bad) = lambda.iter().find(|l| !(**l >= -1e-12 && **l <= 1.0 + 1e-12)) {
            return Err(Error::InvalidLambda(bad));
        }
        let s: f64 = lambda.iter().sum();
        if (s - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidLambda(s));
        }
        Ok(SimplexWeights(project_simplex(&lambda)))
    }

    pub fn uniform(m: usize) -> Self {
        SimplexWeights(vec![1.0 / m as f64; m])
    }

    pub fn vertex(m: usize, i: usize) -> Self {
        let mut v = vec![0.0; m];
        v[i] = 1.0;
        SimplexWeights(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl TryFrom<Vec<f64>> for SimplexWeights {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        SimplexWeights::new(v)
    }
}

impl From<SimplexWeights> for Vec<f64> {
    fn from(w: SimplexWeights) -> Self {
        w.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_projection_matches_definition() {
        assert_eq!(project_simplex(&[0.3, 0.7]), vec![0.3, 0.7]);
        assert_eq!(project_simplex(&[2.0, 0.0]), vec![1.0, 0.0]);
        let p = project_simplex(&[0.5, 0.5, 0.5]);
        assert!(p.iter().all(|x| (x - 1.0 / 3.0).abs() < 1e-15));
        let p = project_simplex(&[-1.0, 0.2, 0.4]);
        assert!((p[0]).abs() < 1e-15 && (p[1] - 0.4).abs() < 1e-15 && (p[2] - 0.6).abs() < 1e-15);
    }

    #[test]
    fn weights_validate() {
        assert!(SimplexWeights::new(vec![0.5, 0.5]).is_ok());
        assert!(SimplexWeights::new(vec![0.5, 0.5 + 1e-13]).is_ok());
        assert!(matches!(SimplexWeights::new(vec![0.6, 0.6]), Err(Error::InvalidLambda(_))));
        assert!(matches!(SimplexWeights::new(vec![1.5, -0.5]), Err(Error::InvalidLambda(_))));
        let w: SimplexWeights = serde_json::from_str("[0.25, 0.75]").unwrap();
        assert_eq!(serde_json::to_string(&w).unwrap(), "[0.25,0.75]");
        assert!(serde_json::from_str::<SimplexWeights>("[0.25, 0.8]").is_err());
    }
}
