use std::f64::consts::PI;

use maxdiss::certificate::{
    certify, margin, phi_form_check, recover_weak_residual, weak_strong_gap, CertificateConfig, GapVariant, PhiWeight,
    TestCase,
};
use maxdiss::energy::WeightSpec;
use maxdiss::flow::{solve, taylor_green, tg_shape, Forcing, ForcingTerm, SystemSpec, TestTrajectory, Trajectory};
use maxdiss::{Error, Grid, SpectralField};

fn tg_run(n: usize, nu: f64, t_end: f64, dt: f64, stride: usize) -> Trajectory {
    let spec = SystemSpec::new(nu, t_end, dt, n).unwrap();
    solve(&spec, &taylor_green(0.0, nu, spec.grid), stride).unwrap()
}

fn exact_tg_samples(n: usize, nu: f64, t_end: f64, samples: usize) -> Trajectory {
    let spec = SystemSpec::new(nu, t_end, t_end / samples as f64, n).unwrap();
    let times: Vec<f64> = (0..=samples).map(|k| k as f64 * spec.dt).collect();
    let states = times.iter().map(|&t| taylor_green(t, nu, spec.grid)).collect();
    Trajectory::from_states(spec, times, states, 1, "exact").unwrap()
}

fn kolmogorov(amplitude: f64) -> Forcing {
    Forcing::single(ForcingTerm::Kolmogorov { amplitude, wavenumber: 2 })
}

#[test]
fn exact_solution_against_itself_has_zero_margin() {
    let u = exact_tg_samples(16, 0.1, 1.0, 20);
    let vt = TestTrajectory::taylor_green(0.1, 1.0, u.spec.grid);
    let cfg = CertificateConfig::navier_stokes();
    for &t in &u.times {
        assert!(margin(&u, &vt, t, &cfg).unwrap().abs() < 1e-9);
    }
}

#[test]
fn margin_outside_sample_range_is_an_error() {
    let u = exact_tg_samples(16, 0.1, 1.0, 10);
    let vt = TestTrajectory::taylor_green(0.1, 1.0, u.spec.grid);
    let r = margin(&u, &vt, 1.5, &CertificateConfig::navier_stokes());
    assert!(matches!(r, Err(Error::TimeOutOfRange { .. })));
}

#[test]
fn zero_test_field_reduces_to_energy_inequality() {
    // u is not a TG mode so the run is genuinely nonlinear
    let spec = SystemSpec::new(0.05, 1.0, 1e-3, 32).unwrap();
    let v0 = SpectralField::from_vector_fn(spec.grid, |x, y| (y.sin() + 0.5 * (2.0 * y).cos(), x.cos() + 0.3 * (x + y).sin()));
    let u = solve(&spec, &v0, 50).unwrap();
    let cfg = CertificateConfig::navier_stokes();
    // independent oracle: E0 - E(t) - (1/2) int nu |grad u|^2 from the ledger, trapezoid in time
    let h = u.sample_dt();
    let mut diss = 0.0;
    for k in 0..u.len() {
        if k > 0 {
            diss += 0.25 * h * (u.ledger.dissipation[k] + u.ledger.dissipation[k - 1]);
        }
        let oracle = u.ledger.energy[0] - u.ledger.energy[k] - diss;
        let m = margin(&u, &TestTrajectory::Zero, u.times[k], &cfg).unwrap();
        assert!((m - oracle).abs() < 1e-4 * u.ledger.energy[0], "t = {}: {m} vs {oracle}", u.times[k]);
        assert!(m >= -1e-10);
    }
}

#[test]
fn galerkin_tg_is_certified_against_exact_tg() {
    let u = tg_run(32, 0.1, 1.0, 1e-3, 50);
    let vt = TestTrajectory::taylor_green(0.1, 1.0, u.spec.grid);
    let cfg = CertificateConfig::navier_stokes();
    for &t in &u.times {
        assert!(margin(&u, &vt, t, &cfg).unwrap() >= -1e-8);
    }
}

#[test]
fn certify_family_passes_and_reports_every_entry() {
    let u = tg_run(32, 0.1, 1.0, 1e-3, 50);
    let g = u.spec.grid;
    let family = vec![
        TestCase::new("exact_tg", TestTrajectory::taylor_green(0.1, 1.0, g)),
        TestCase::new("zero", TestTrajectory::Zero),
        TestCase::new("tg_amp_1.1", TestTrajectory::taylor_green(0.1, 1.1, g)),
    ];
    let rep = certify(&u, &family, &CertificateConfig::navier_stokes()).unwrap();
    assert!(rep.verdict, "min slack {}", rep.min_slack());
    assert!(rep.errors.is_empty());
    assert_eq!(rep.entries.len(), 3 * u.len());
    assert_eq!(rep.tests.len(), 3);
    assert!(rep.min_margin() >= -1e-8);
    for e in &rep.entries {
        assert!(e.margin.is_finite() && e.tol >= 0.0);
        assert!((e.tol - e.tol_parts.total()).abs() <= 1e-15 * e.tol);
        assert_eq!(e.passes(), e.margin >= -e.tol);
        assert!(e.log_gronwall >= 0.0);
    }
    assert!(rep.to_csv().lines().count() == rep.entries.len() + 1);
}

#[test]
fn certify_preconditions() {
    let u = tg_run(16, 0.1, 0.1, 0.01, 1);
    let cfg = CertificateConfig::navier_stokes();
    assert!(matches!(certify(&u, &[], &cfg), Err(Error::EmptyFamily)));
    let mut empty = u.clone();
    empty.times.clear();
    empty.states.clear();
    let fam = [TestCase::new("zero", TestTrajectory::Zero)];
    assert!(matches!(certify(&empty, &fam, &cfg), Err(Error::EmptyTrajectory)));
}

#[test]
fn bad_test_trajectory_is_isolated_per_entry() {
    let u = tg_run(16, 0.1, 1.0, 0.01, 10);
    // a spline whose knots only cover half of the run
    let short = tg_run(16, 0.1, 0.5, 0.01, 10);
    let family = vec![
        TestCase::new("exact_tg", TestTrajectory::taylor_green(0.1, 1.0, u.spec.grid)),
        TestCase::new("short_spline", TestTrajectory::spline(&short).unwrap()),
    ];
    let rep = certify(&u, &family, &CertificateConfig::navier_stokes()).unwrap();
    assert!(!rep.verdict);
    assert_eq!(rep.entries_for("exact_tg").count(), u.len());
    assert_eq!(rep.entries_for("short_spline").count(), short.len());
    assert_eq!(rep.errors.len(), u.len() - short.len());
    assert!(rep.errors.iter().all(|e| e.test_id == "short_spline" && e.t.unwrap() > 0.5));
}

#[test]
fn nonsolenoidal_test_field_needs_the_correction_option() {
    let u = tg_run(16, 0.1, 0.2, 0.01, 5);
    let g = u.spec.grid;
    let grad = SpectralField::from_scalar_fn(g, |x, y| (x + y).cos()).gradient();
    let vt = TestTrajectory::taylor_green(0.1, 1.0, g).plus(TestTrajectory::steady(grad.scale(0.1)));
    let mut cfg = CertificateConfig::navier_stokes();
    assert!(matches!(margin(&u, &vt, 0.2, &cfg), Err(Error::NotSolenoidal(_))));
    cfg.residual.nonsolenoidal_correction = true;
    // a pure gradient is removed by the projection, so the margin matches the exact TG one
    let m = margin(&u, &vt, 0.2, &cfg).unwrap();
    let m0 = margin(&u, &TestTrajectory::taylor_green(0.1, 1.0, g), 0.2, &cfg).unwrap();
    assert!((m - m0).abs() < 1e-12, "{m} {m0}");
}

#[test]
fn phi_constant_one_is_inadmissible() {
    let u = tg_run(16, 0.1, 0.2, 0.01, 5);
    let vt = TestTrajectory::taylor_green(0.1, 1.0, u.spec.grid);
    let cfg = CertificateConfig::navier_stokes();
    let r = phi_form_check(&u, &vt, &cfg, &[PhiWeight::Constant { value: 1.0 }]);
    assert!(matches!(r, Err(Error::InadmissiblePhi(_))));
    let r = phi_form_check(&u, &vt, &cfg, &[PhiWeight::Indicator { t: 0.05, width: 0.0 }]);
    assert!(matches!(r, Err(Error::InadmissiblePhi(_))));
}

#[test]
fn phi_ramp_on_passing_trajectory_is_within_bound() {
    let u = tg_run(32, 0.1, 1.0, 1e-3, 20);
    let vt = TestTrajectory::taylor_green(0.1, 1.1, u.spec.grid);
    let rep = phi_form_check(&u, &vt, &CertificateConfig::navier_stokes(), &[PhiWeight::Ramp]).unwrap();
    let r = &rep.results[0];
    assert!(r.violation <= r.tau_bound);
    assert!(r.value > 0.0);
}

#[test]
fn mollified_indicator_converges_to_pointwise_margin() {
    // a moderate weight keeps the margin varying in time; the Serrin weight saturates it at once
    // every solver step is sampled so the narrowest mollifier is still resolved
    let u = tg_run(16, 0.1, 1.0, 1e-3, 1);
    let vt = TestTrajectory::taylor_green(0.1, 1.2, u.spec.grid);
    let cfg = CertificateConfig::new(WeightSpec::Constant { value: 0.5 });
    let t = 0.5;
    let m = margin(&u, &vt, t, &cfg).unwrap();
    // the descent sits on [t, t + w], so the gap to the pointwise margin is first order in w
    let widths = [0.2, 0.1, 0.05];
    let phis: Vec<PhiWeight> = widths.iter().map(|&w| PhiWeight::Indicator { t, width: w }).collect();
    let rep = phi_form_check(&u, &vt, &cfg, &phis).unwrap();
    let errs: Vec<f64> = rep.results.iter().map(|r| (r.value - m).abs()).collect();
    for pair in errs.windows(2) {
        let ratio = pair[0] / pair[1];
        assert!((1.0..=4.0).contains(&ratio), "{errs:?}");
    }
    assert!(errs[2] < 0.05 * m.abs(), "{errs:?} vs {m}");
}

fn recovery_perturbation(g: Grid) -> SpectralField {
    SpectralField::from_vector_fn(g, |x, y| ((2.0 * y).sin() + (x + y).cos(), -(x + y).cos())).leray_project()
}

#[test]
fn recovered_residual_matches_direct_pairing_under_forcing_mismatch() {
    // the run is driven by a Kolmogorov force the certificate does not know about
    let spec = SystemSpec::new(0.1, 1.0, 1e-3, 16).unwrap().with_forcing(kolmogorov(0.5));
    let u = solve(&spec, &taylor_green(0.0, 0.1, spec.grid), 20).unwrap();
    let cfg = CertificateConfig::navier_stokes().with_forcing(Forcing::none());
    let r = recovery_perturbation(spec.grid);
    let rec = recover_weak_residual(&u, &r, &[-2e-3, -1e-3, 1e-3, 2e-3], &cfg).unwrap();
    assert!(rec.direct.abs() > 1e-2);
    assert!(rec.relative_error < 1e-4, "{rec:?}");
    // A(u) is the missing force, so the pairing is close to int <f, r> e^{-I}
    let f = kolmogorov(0.5).resolve(spec.grid).unwrap().eval(0.0);
    let plain = f.inner(&r).unwrap();
    assert!(rec.coefficient.signum() == plain.signum());
}

#[test]
fn recovered_residual_vanishes_for_unforced_tg() {
    let u = tg_run(16, 0.1, 1.0, 1e-3, 20);
    let r = recovery_perturbation(u.spec.grid);
    let rec = recover_weak_residual(&u, &r, &[-2e-3, -1e-3, 1e-3, 2e-3], &CertificateConfig::navier_stokes()).unwrap();
    assert!(rec.coefficient.abs() < 1e-6, "{rec:?}");
}

#[test]
fn recovery_remainder_is_quadratic() {
    let spec = SystemSpec::new(0.1, 1.0, 1e-3, 16).unwrap().with_forcing(kolmogorov(0.5));
    let u = solve(&spec, &taylor_green(0.0, 0.1, spec.grid), 20).unwrap();
    let cfg = CertificateConfig::navier_stokes().with_forcing(Forcing::none());
    let r = recovery_perturbation(spec.grid);
    let rec = recover_weak_residual(&u, &r, &[0.2, 0.1, 0.05, 0.025], &cfg).unwrap();
    for w in rec.remainders.windows(2) {
        let ratio = w[0] / w[1];
        assert!((ratio - 4.0).abs() < 0.4, "{:?}", rec.remainders);
    }
}

#[test]
fn recovery_needs_three_distinct_alphas() {
    let u = tg_run(16, 0.1, 0.2, 0.01, 5);
    let r = recovery_perturbation(u.spec.grid);
    let e = recover_weak_residual(&u, &r, &[1e-3, 1e-3, 0.0, 2e-3], &CertificateConfig::navier_stokes());
    assert!(matches!(e, Err(Error::DegenerateFit(_))));
}

#[test]
fn gap_is_trivial_for_identical_data() {
    let u = tg_run(32, 0.1, 1.0, 1e-3, 50);
    let v = TestTrajectory::taylor_green(0.1, 1.0, u.spec.grid);
    let f = Forcing::none();
    let rep = weak_strong_gap(&u, &v, &f, &f, &WeightSpec::serrin_auto(4.0), GapVariant::NavierStokes).unwrap();
    assert!(rep.holds);
    for e in &rep.entries {
        assert!(e.lhs.abs() < 1e-12 && e.rhs.abs() < 1e-12, "{e:?}");
    }
}

#[test]
fn gap_scales_quadratically_in_initial_perturbation() {
    let nu = 0.1;
    let spec = SystemSpec::new(nu, 1.0, 1e-3, 32).unwrap();
    let g = spec.grid;
    let pert = SpectralField::from_vector_fn(g, |x, y| ((2.0 * y).sin(), (x).cos())).leray_project();
    let v = TestTrajectory::taylor_green(nu, 1.0, g);
    let f = Forcing::none();
    let run = |d: f64| {
        let u = solve(&spec, &taylor_green(0.0, nu, g).axpy(d, &pert).unwrap(), 50).unwrap();
        weak_strong_gap(&u, &v, &f, &f, &WeightSpec::serrin_auto(4.0), GapVariant::NavierStokes).unwrap()
    };
    let (a, b) = (run(0.1), run(0.05));
    assert!(a.holds && b.holds);
    let last = a.entries.len() - 1;
    let ratio = a.entries[last].rel_energy / b.entries[last].rel_energy;
    assert!((ratio - 4.0).abs() < 0.2, "{ratio}");
    for e in a.entries.iter().chain(&b.entries) {
        assert!(e.lhs <= e.rhs * (1.0 + 1e-9));
    }
}

#[test]
fn gap_forcing_inflation_matches_closed_form() {
    // constant weight kappa and steady (sin 2y, 0): inflation = (1/nu) d^2 (pi^2/2) (1 - e^{-kappa t}) / kappa
    let (nu, d, kappa) = (0.1, 0.05, 0.7);
    let spec = SystemSpec::new(nu, 1.0, 1e-3, 16).unwrap().with_forcing(kolmogorov(d));
    let u1 = solve(&spec, &taylor_green(0.0, nu, spec.grid), 20).unwrap();
    let v = TestTrajectory::taylor_green(nu, 1.0, spec.grid);
    let rep = weak_strong_gap(
        &u1,
        &v,
        &kolmogorov(d),
        &Forcing::none(),
        &WeightSpec::Constant { value: kappa },
        GapVariant::NavierStokes,
    )
    .unwrap();
    assert!(rep.holds);
    for e in &rep.entries {
        let want = d * d * PI * PI / 2.0 / nu * (1.0 - (-kappa * e.t).exp()) / kappa;
        assert!((e.inflation - want).abs() < 1e-6 * want.max(1e-12), "t = {}: {} vs {want}", e.t, e.inflation);
        assert!((e.log_gronwall - kappa * e.t).abs() < 1e-12);
    }
}

#[test]
fn gap_preconditions_and_euler_variant() {
    let u = tg_run(16, 0.0, 0.2, 0.01, 5);
    let v = TestTrajectory::steady(tg_shape(u.spec.grid));
    let f = Forcing::none();
    let w = WeightSpec::euler();
    assert!(weak_strong_gap(&u, &v, &f, &f, &w, GapVariant::NavierStokes).is_err());
    let rep = weak_strong_gap(&u, &v, &f, &f, &w, GapVariant::Euler).unwrap();
    assert!(rep.holds);
    // weight K + 1
    let k = w.eval(&tg_shape(u.spec.grid), 0.0).unwrap();
    let last = rep.entries.last().unwrap();
    assert!((last.log_gronwall - (k + 1.0) * 0.2).abs() < 1e-10);
}

