//! Solves Navier-Stokes from Taylor-Green data and compares against the closed form.

use maxdiss::flow::{solve, taylor_green, tg_shape, SystemSpec};
use maxdiss::Result;

fn main() -> Result<()> {
    let spec = SystemSpec::new(0.1, 1.0, 1e-3, 32)?;
    let traj = solve(&spec, &tg_shape(spec.grid), 100)?;
    println!("{:>6} {:>14} {:>12}", "t", "energy", "L2 error");
    for (k, (&t, u)) in traj.times.iter().zip(&traj.states).enumerate() {
        let err = u.axpy(-1.0, &taylor_green(t, spec.nu, spec.grid))?.l2_norm();
        println!("{t:>6.2} {:>14.10} {err:>12.3e}", traj.ledger.energy[k]);
    }
    Ok(())
}
