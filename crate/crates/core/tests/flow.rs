use std::f64::consts::PI;

use maxdiss::flow::{
    advance, forced_tg_amplitude, mode_count, nse_rhs, random_solenoidal, recover_pressure, solve, taylor_green,
    taylor_green_pressure, tg_shape, truncate_modes, Forcing, ForcingTerm, SystemSpec,
};
use maxdiss::{Grid, SpectralField};

fn g(n: usize) -> Grid {
    Grid::new(n).unwrap()
}

#[test]
fn rhs_of_zero_and_taylor_green() {
    let spec = SystemSpec::new(0.1, 1.0, 1e-3, 16).unwrap();
    let z = SpectralField::zeros(spec.grid, 2).tag_solenoidal();
    assert_eq!(nse_rhs(&z, &spec, 0.0).unwrap().max_abs_coeff(), 0.0);
    let tg = tg_shape(spec.grid);
    let r = nse_rhs(&tg, &spec, 0.0).unwrap();
    assert!(r.max_coeff_diff(&tg.scale(-2.0 * spec.nu)).unwrap() < 1e-15);
    let euler = SystemSpec::new(0.0, 1.0, 1e-3, 16).unwrap();
    assert!(nse_rhs(&tg, &euler, 0.0).unwrap().max_abs_coeff() < 1e-15);
}

#[test]
fn stokes_mode_decays_exactly_and_euler_tg_is_steady() {
    let spec = SystemSpec::new(0.3, 1.0, 0.05, 16).unwrap();
    let u = SpectralField::from_vector_fn(spec.grid, |x, y| ((2.0 * y + x).sin(), -0.5 * (2.0 * y + x).sin())).leray_project();
    let k2 = 5.0;
    let stepped = advance(&u, &spec, 0.0, spec.dt).unwrap();
    let want = u.scale((-spec.nu * k2 * spec.dt).exp());
    assert!(stepped.max_coeff_diff(&want).unwrap() < 1e-12);
    let euler = SystemSpec::new(0.0, 1.0, 0.05, 16).unwrap();
    let tg = tg_shape(euler.grid);
    assert!(advance(&tg, &euler, 0.0, euler.dt).unwrap().max_coeff_diff(&tg).unwrap() < 1e-12);
}

/// Forced Taylor-Green stays on the Taylor-Green shape, with amplitude solving a scalar ODE.
fn forced_error(dt: f64) -> f64 {
    let (nu, a, w) = (0.1, 1.0, 5.0);
    let forcing = Forcing::single(ForcingTerm::TaylorGreen { amplitude: a, omega: w });
    let spec = SystemSpec::new(nu, 1.0, dt, 16).unwrap().with_forcing(forcing);
    let traj = solve(&spec, &tg_shape(spec.grid), 1).unwrap();
    traj.times
        .iter()
        .zip(&traj.states)
        .map(|(&t, s)| s.axpy(-forced_tg_amplitude(1.0, nu, a, w, t), &tg_shape(spec.grid)).unwrap().l2_norm())
        .fold(0.0, f64::max)
}

#[test]
fn time_stepping_is_fourth_order() {
    let errs: Vec<f64> = [0.1, 0.05, 0.025].iter().map(|&dt| forced_error(dt)).collect();
    for w in errs.windows(2) {
        let ratio = w[0] / w[1];
        assert!((ratio - 16.0).abs() <= 0.2 * 16.0, "{errs:?}");
    }
}

#[test]
fn navier_stokes_taylor_green_matches_closed_form() {
    let spec = SystemSpec::new(0.1, 1.0, 1e-3, 32).unwrap();
    let traj = solve(&spec, &tg_shape(spec.grid), 10).unwrap();
    for (&t, s) in traj.times.iter().zip(&traj.states) {
        let err = s.axpy(-1.0, &taylor_green(t, spec.nu, spec.grid)).unwrap().l2_norm();
        assert!(err <= 1e-6, "t = {t}: {err}");
    }
    for (k, &t) in traj.times.iter().enumerate() {
        let exact = PI * PI * (-4.0 * spec.nu * t).exp();
        assert!((traj.ledger.energy[k] - exact).abs() <= 1e-6 * exact);
    }
}

#[test]
fn zero_data_and_euler_energy() {
    let spec = SystemSpec::new(0.1, 0.5, 1e-2, 16).unwrap();
    let z = solve(&spec, &SpectralField::zeros(spec.grid, 2), 1).unwrap();
    assert!(z.states.iter().all(|s| s.max_abs_coeff() == 0.0));
    let euler = SystemSpec::new(0.0, 1.0, 1e-3, 16).unwrap();
    let e = solve(&euler, &tg_shape(euler.grid), 100).unwrap();
    let e0 = e.ledger.energy[0];
    assert!(e.ledger.energy.iter().all(|x| (x - e0).abs() <= 1e-8));
}

#[test]
fn galerkin_truncation_is_an_orthogonal_projection() {
    let grid = g(16);
    let u = random_solenoidal(grid, 6, 1);
    let w = random_solenoidal(grid, 6, 2);
    assert_eq!(truncate_modes(&u, mode_count(grid)).max_coeff_diff(&u).unwrap(), 0.0);
    assert_eq!(truncate_modes(&u, 0).max_abs_coeff(), 0.0);
    for keep in [1, 5, 12, 40, 100] {
        let a = truncate_modes(&u, keep).inner(&w).unwrap();
        let b = u.inner(&truncate_modes(&w, keep)).unwrap();
        assert!((a - b).abs() < 1e-14, "{keep}: {a} vs {b}");
        let pu = truncate_modes(&u, keep);
        assert_eq!(truncate_modes(&pu, keep).max_coeff_diff(&pu).unwrap(), 0.0);
    }
}

#[test]
fn truncation_of_analytic_fields_converges_spectrally() {
    // streamfunction exp(cos x + sin y) / 2 has a super-exponentially decaying spectrum
    let grid = g(32);
    let tg = tg_shape(grid);
    let pert = maxdiss::flow::velocity_from_streamfunction(&SpectralField::from_scalar_fn(grid, |x, y| {
        0.5 * (x.cos() + y.sin()).exp()
    }));
    let v = tg.axpy(0.1, &pert).unwrap();
    let errs: Vec<f64> = [50, 100, 200, 400]
        .iter()
        .map(|&keep| v.axpy(-1.0, &truncate_modes(&v, keep)).unwrap().h1_seminorm())
        .collect();
    for w in errs.windows(2) {
        assert!(w[1] < 0.1 * w[0], "{errs:?}");
    }
    assert!(errs[3] < 1e-8, "{errs:?}");
}

#[test]
fn taylor_green_identities() {
    let grid = g(32);
    let nu = 0.1;
    let t = 0.3;
    let v = taylor_green(t, nu, grid);
    assert!((0.5 * tg_shape(grid).l2_norm().powi(2) - PI * PI).abs() < 1e-12);
    assert!(v.divergence().max_abs_coeff() <= 1e-14);
    // d_t v + (v.grad)v - nu lap v + grad p on the collocation grid
    let p = taylor_green_pressure(t, nu, grid);
    let r = v
        .scale(-2.0 * nu)
        .axpy(1.0, &v.convect(&v).unwrap())
        .unwrap()
        .axpy(-nu, &v.laplacian())
        .unwrap()
        .axpy(1.0, &p.grad_scalar())
        .unwrap();
    let worst = r.to_physical().iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
    assert!(worst <= 1e-12, "{worst}");
}

#[test]
fn pressure_recovery() {
    let grid = g(32);
    let nu = 0.1;
    for t in [0.0, 0.4] {
        let v = taylor_green(t, nu, grid);
        let p = recover_pressure(&v, &SpectralField::zeros(grid, 2)).unwrap();
        assert!(p.max_coeff_diff(&taylor_green_pressure(t, nu, grid)).unwrap() < 1e-10);
        assert!(p.mean()[0].abs() < 1e-14);
    }
    let phi = SpectralField::from_scalar_fn(grid, |x, y| 2.0 + x.sin() * (2.0 * y).cos());
    let p = recover_pressure(&SpectralField::zeros(grid, 2), &phi.grad_scalar()).unwrap();
    let want = phi.axpy(-1.0, &SpectralField::from_scalar_fn(grid, |_, _| 2.0)).unwrap();
    assert!(p.max_coeff_diff(&want).unwrap() < 1e-14);
    assert!(p.mean()[0].abs() < 1e-14);
}
