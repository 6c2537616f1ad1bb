//! Builds a resolution ladder from perturbed Taylor-Green data and selects the
//! least-energy mixture.

use maxdiss::flow::{random_solenoidal, tg_shape, SystemSpec};
use maxdiss::selector::{assemble_family, build_candidates, select, CandidateRecipe, SelectOptions};
use maxdiss::Result;

fn main() -> Result<()> {
    let spec = SystemSpec::new(0.1, 0.5, 0.005, 16)?;
    let tg = tg_shape(spec.grid);
    let u0 = tg.axpy(0.3 * tg.l2_norm(), &random_solenoidal(spec.grid, 4, 1))?;
    let members = build_candidates(&spec, &u0, &CandidateRecipe::resolution_ladder(0.05))?;
    let family = assemble_family(members, None, None)?;
    let sel = select(&family, &SelectOptions::default())?.selection;
    for ((id, l), v) in sel.member_ids.iter().zip(sel.lambda.as_slice()).zip(&sel.vertex_objectives) {
        println!("{id:<24} lambda {l:.6} vertex objective {v:.10}");
    }
    println!("objective {:.10}, kkt residual {:.1e}, iterations {}", sel.objective, sel.kkt_residual, sel.iterations);
    Ok(())
}
