//! Recovers the pressure of the Taylor-Green vortex from its velocity.

use maxdiss::flow::{recover_pressure, taylor_green, taylor_green_pressure};
use maxdiss::{Grid, Result, SpectralField};

fn main() -> Result<()> {
    let g = Grid::new(32)?;
    for t in [0.0, 0.5, 1.0] {
        let p = recover_pressure(&taylor_green(t, 0.1, g), &SpectralField::zeros(g, 2))?;
        let err = p.max_coeff_diff(&taylor_green_pressure(t, 0.1, g))?;
        println!("t = {t}: max coefficient error {err:.2e}, mean {:.1e}", p.mean()[0]);
    }
    Ok(())
}
