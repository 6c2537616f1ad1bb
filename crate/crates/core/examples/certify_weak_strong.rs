//! Certifies a computed flow against exact and perturbed Taylor-Green comparison flows.

use maxdiss::certificate::{certify, CertificateConfig, TestCase};
use maxdiss::flow::{solve, tg_shape, SystemSpec, TestTrajectory};
use maxdiss::Result;

fn main() -> Result<()> {
    let spec = SystemSpec::new(0.1, 1.0, 1e-3, 32)?;
    let u = solve(&spec, &tg_shape(spec.grid), 20)?;
    let tests = vec![
        TestCase::new("exact_tg", TestTrajectory::taylor_green(spec.nu, 1.0, spec.grid)),
        TestCase::new("zero", TestTrajectory::Zero),
        TestCase::new("tg_amp_1.5", TestTrajectory::taylor_green(spec.nu, 1.5, spec.grid)),
    ];
    let rep = certify(&u, &tests, &CertificateConfig::navier_stokes())?;
    println!("verdict {} over {} entries, min margin {:.3e}", rep.verdict, rep.entries.len(), rep.min_margin());
    print!("{}", rep.to_csv().lines().take(6).collect::<Vec<_>>().join("\n"));
    println!();
    Ok(())
}
