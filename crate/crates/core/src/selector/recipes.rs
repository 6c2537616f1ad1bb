use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::flow::{solve, SystemSpec, Trajectory};

/// Candidate generation: every combination of grid size, dealiasing and time step,
/// all started from the same initial datum and sampled every `sample_dt`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CandidateRecipe {
    #[serde(default = "d_res")]
    pub resolutions: Vec<usize>,
    #[serde(default = "d_dealias")]
    pub dealias: Vec<bool>,
    /// Time steps; the base system's step when empty.
    #[serde(default)]
    pub dts: Vec<f64>,
    pub sample_dt: f64,
}

fn d_res() -> Vec<usize> {
    vec![16, 24, 32]
}
fn d_dealias() -> Vec<bool> {
    vec![true]
}

impl CandidateRecipe {
    pub fn resolution_ladder(sample_dt: f64) -> Self {
        CandidateRecipe { resolutions: d_res(), dealias: d_dealias(), dts: Vec::new(), sample_dt }
    }
}

fn stride(sample_dt: f64, dt: f64) -> Result<usize> {
    let s = sample_dt / dt;
    if s < 0.5 || (s - s.round()).abs() > 1e-9 * s {
        return Err(Error::InvalidSpec(format!("sample_dt {sample_dt} is not a multiple of dt {dt}")));
    }
    Ok(s.round() as usize)
}

/// Solves every recipe combination in parallel; ids look like `n32_da_dt0.001`.
pub fn build_candidates(
    base: &SystemSpec,
    u0: &SpectralField,
    recipe: &CandidateRecipe,
) -> Result<Vec<(String, Trajectory)>> {
    let dts = if recipe.dts.is_empty() { vec![base.dt] } else { recipe.dts.clone() };
    let mut jobs = Vec::new();
    for &n in &recipe.resolutions {
        for &da in &recipe.dealias {
            for &dt in &dts {
                jobs.push((n, da, dt));
            }
        }
    }
    if jobs.is_empty() {
        return Err(Error::EmptyFamily);
    }
    jobs.par_iter()
        .map(|&(n, da, dt)| {
            let spec = SystemSpec { dt, ..base.on_grid(n)?.with_dealias(da) };
            spec.validate()?;
            let id = format!("n{n}_{}_dt{dt}", if da { "da" } else { "full" });
            Ok((id, solve(&spec, u0, stride(recipe.sample_dt, dt)?)?))
        })
        .collect()
}
