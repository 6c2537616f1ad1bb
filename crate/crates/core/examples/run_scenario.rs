//! Runs the full pipeline for every preset scenario into a temporary directory.

use maxdiss::scenario::{report, run_scenario, ScenarioConfig, ScenarioKind};
use maxdiss::Result;

fn main() -> Result<()> {
    let root = std::env::temp_dir().join("maxdiss-example");
    for kind in [ScenarioKind::TaylorGreen, ScenarioKind::PerturbedTg, ScenarioKind::TwoVortex, ScenarioKind::EulerTg, ScenarioKind::MvLadder] {
        let mut cfg = ScenarioConfig::preset(kind, 16)?;
        cfg.system.t_end = 0.25;
        cfg.output = root.join(format!("{kind:?}").to_lowercase());
        let s = run_scenario(&cfg)?;
        println!("{kind:?}: certified {}, lambda {:?}, {} artifacts", s.certified, s.selection.lambda.as_slice(), s.manifest.files.len());
        report(&cfg.output)?;
    }
    println!("trees under {}", root.display());
    Ok(())
}
