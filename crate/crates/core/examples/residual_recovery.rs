//! Recovers the weak residual of a flow driven by a force the certificate does not see.

use maxdiss::certificate::{recover_weak_residual, CertificateConfig};
use maxdiss::flow::{solve, tg_shape, Forcing, ForcingTerm, SystemSpec};
use maxdiss::{Result, SpectralField};

fn main() -> Result<()> {
    let force = Forcing::single(ForcingTerm::Kolmogorov { amplitude: 0.5, wavenumber: 2 });
    let spec = SystemSpec::new(0.1, 1.0, 1e-3, 16)?.with_forcing(force);
    let u = solve(&spec, &tg_shape(spec.grid), 20)?;
    let cfg = CertificateConfig::navier_stokes().with_forcing(Forcing::none());
    let r = SpectralField::from_vector_fn(spec.grid, |x, y| ((2.0 * y).sin(), 0.0 * x)).leray_project();
    let rec = recover_weak_residual(&u, &r, &[-2e-3, -1e-3, 1e-3, 2e-3], &cfg)?;
    println!("fitted {:.8e}, direct {:.8e}, relative error {:.1e}", rec.coefficient, rec.direct, rec.relative_error);
    Ok(())
}
