//! Perturbs the initial data by delta and tracks how far the selected solution moves.

use maxdiss::flow::{random_solenoidal, tg_shape, SystemSpec, Trajectory};
use maxdiss::selector::{build_candidates, continuous_dependence_study, CandidateRecipe, DependenceOptions, Perturbation};
use maxdiss::{Result, SpectralField};

fn ladder(spec: &SystemSpec, v0: &SpectralField) -> Result<Vec<(String, Trajectory)>> {
    let recipe = CandidateRecipe { resolutions: vec![16, 24], ..CandidateRecipe::resolution_ladder(0.05) };
    build_candidates(spec, v0, &recipe)
}

fn main() -> Result<()> {
    let spec = SystemSpec::new(0.1, 0.5, 0.005, 16)?;
    let dir = Perturbation { initial: Some(random_solenoidal(spec.grid, 3, 6)), forcing: None };
    let deltas = [1e-1, 3e-2, 1e-2, 3e-3, 1e-3];
    let rep = continuous_dependence_study(&spec, &tg_shape(spec.grid), &deltas, &dir, &ladder, &DependenceOptions::default())?;
    println!("{:>8} {:>14} {:>14} {:>14}", "delta", "weak dist", "max rel E", "final rel E");
    for r in &rep.rows {
        println!("{:>8.0e} {:>14.4e} {:>14.4e} {:>14.4e}", r.delta, r.weak_distance, r.max_rel_energy, r.final_rel_energy);
    }
    Ok(())
}
