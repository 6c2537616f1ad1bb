//! Euler energy conservation, then defect measures from a vanishing-viscosity ladder.

use maxdiss::flow::{solve, tg_shape, SystemSpec};
use maxdiss::mv::{defect_from_pair, vanishing_viscosity_ladder, DefectOptions};
use maxdiss::{Result, SpectralField};

fn main() -> Result<()> {
    let euler = SystemSpec::new(0.0, 1.0, 1e-3, 16)?;
    let u0 = SpectralField::from_vector_fn(euler.grid, |x, y| (y.sin() + 0.4 * (2.0 * y).cos(), x.cos() + 0.3 * (x + y).sin()));
    let traj = solve(&euler, &u0, 100)?;
    let e = &traj.ledger.energy;
    println!("Euler energy {:.12} -> {:.12}", e[0], e[e.len() - 1]);
    let tg = tg_shape(euler.grid);
    let steady = solve(&euler, &tg, 1000)?;
    println!("steady Taylor-Green moves by {:.2e} in L2", steady.states[steady.len() - 1].axpy(-1.0, &tg)?.l2_norm());

    let base = SystemSpec::new(1e-2, 0.5, 1e-3, 16)?;
    let runs = vanishing_viscosity_ladder(&base, &u0, &[2e-2, 1e-2, 5e-3], 50)?;
    for pair in runs.windows(2) {
        let m = defect_from_pair(&pair[1].1, &pair[0].1, &DefectOptions::default())?;
        let last = m.len() - 1;
        println!(
            "{} vs {}: final defect trace {:.4e}, min eigenvalue {:.2e}, clipped trace {:.2e}",
            pair[0].0,
            pair[1].0,
            m.trace_mass(last),
            m.min_eigenvalue(),
            m.clip.clipped_trace
        );
    }
    Ok(())
}
