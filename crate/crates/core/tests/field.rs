use std::f64::consts::PI;

use maxdiss::flow::tg_shape;
use maxdiss::{Grid, SpectralField};

fn g(n: usize) -> Grid {
    Grid::new(n).unwrap()
}

#[test]
fn leray_removes_gradients_and_keeps_solenoidal_fields() {
    let phi = SpectralField::from_scalar_fn(g(16), |x, y| x.sin() * y.sin());
    assert!(phi.grad_scalar().leray_project().max_abs_coeff() < 1e-15);
    let tg = tg_shape(g(16));
    assert!(tg.leray_project().max_coeff_diff(&tg).unwrap() < 1e-14);
}

#[test]
fn leray_matches_the_per_mode_formula() {
    // (sin(x + y), 0) lives on k = +-(1, 1): (I - k k^T / 2)(c, 0) = (c / 2, -c / 2)
    let u = SpectralField::from_vector_fn(g(16), |x, y| ((x + y).sin(), 0.0));
    let p = u.leray_project();
    let want = SpectralField::from_vector_fn(g(16), |x, y| (0.5 * (x + y).sin(), -0.5 * (x + y).sin()));
    assert!(p.max_coeff_diff(&want).unwrap() < 1e-15);
    // a mode parallel to its wavevector is a pure gradient
    let v = SpectralField::from_vector_fn(g(16), |x, _| (x.sin(), 0.0));
    assert!(v.leray_project().max_abs_coeff() < 1e-15);
}

#[test]
fn spectral_derivatives_are_exact_at_collocation_points() {
    let grid = g(16);
    let d = SpectralField::from_scalar_fn(grid, |x, _| x.sin()).grad_scalar().to_physical();
    // samples are row-major with x = coord(idx / n)
    for idx in 0..grid.len() {
        let x = grid.coord(idx / 16);
        assert!((d[0][idx] - x.cos()).abs() <= 1e-13);
        assert!(d[1][idx].abs() <= 1e-13);
    }
    let c = SpectralField::from_scalar_fn(grid, |_, _| 3.0);
    assert_eq!(c.grad_scalar().max_abs_coeff(), 0.0);
    // trace of the symmetrized gradient is the divergence
    let tg = tg_shape(grid);
    let gr = tg.gradient();
    let tr = gr.component(0).axpy(1.0, &gr.component(3)).unwrap();
    assert!(tr.max_abs_coeff() < 1e-15);
}

#[test]
fn derivative_of_sine_in_physical_layout() {
    let grid = g(32);
    let u = SpectralField::from_scalar_fn(grid, |x, y| x.sin() + 0.0 * y);
    let want = SpectralField::from_vector_fn(grid, |x, _| (x.cos(), 0.0));
    assert!(u.grad_scalar().max_coeff_diff(&want).unwrap() < 1e-14);
}

#[test]
fn norms_against_hand_values() {
    let s = SpectralField::from_scalar_fn(g(16), |x, _| x.sin());
    assert!((s.l2_norm() - (2.0 * PI * PI).sqrt()).abs() < 1e-13);
    let z = SpectralField::zeros(g(16), 2);
    for p in [1.0, 2.0, 3.0, 4.0, f64::INFINITY] {
        assert_eq!(z.lp_norm(p).unwrap(), 0.0);
    }
    assert!((s.h_minus1_norm().unwrap() - s.l2_norm()).abs() < 1e-13);
    let s4 = SpectralField::from_scalar_fn(g(16), |x, _| (4.0 * x).sin());
    assert!((s4.h_minus1_norm().unwrap() - s4.l2_norm() / 4.0).abs() < 1e-13);
    assert_eq!(z.h_minus1_norm().unwrap(), 0.0);
}

#[test]
fn l4_norm_agrees_with_fine_reference_quadrature() {
    let m = 512;
    let h = 2.0 * PI / m as f64;
    let mut reference = 0.0;
    for i in 0..m {
        for j in 0..m {
            let (x, y) = (i as f64 * h, j as f64 * h);
            let (a, b) = (x.sin() * y.cos(), -x.cos() * y.sin());
            reference += (a * a + b * b).powi(2) * h * h;
        }
    }
    let q = tg_shape(g(16)).lp_norm(4.0).unwrap().powi(4);
    assert!((q - reference).abs() < 1e-10 * reference, "{q} vs {reference}");
}

#[test]
fn inner_product_identities() {
    let grid = g(16);
    let tg = tg_shape(grid);
    assert!((tg.inner(&tg).unwrap() - tg.l2_norm().powi(2)).abs() < 1e-12);
    let s = SpectralField::from_scalar_fn(grid, |x, _| x.sin());
    let c = SpectralField::from_scalar_fn(grid, |x, _| x.cos());
    assert!(s.inner(&c).unwrap().abs() < 1e-15);
    let phi = SpectralField::from_scalar_fn(grid, |x, y| (x + 2.0 * y).cos() * (3.0 * y).sin() + x.sin());
    assert!(tg.inner(&phi.grad_scalar()).unwrap().abs() < 1e-13);
}

#[test]
fn padding_is_band_limited_interpolation() {
    let small = tg_shape(g(16));
    let big = small.pad_to(32).unwrap();
    assert!(big.max_coeff_diff(&tg_shape(g(32))).unwrap() < 1e-15);
    assert!((big.l2_norm() - small.l2_norm()).abs() < 1e-13);
    assert_eq!(big.truncate_to(16).unwrap().max_coeff_diff(&small).unwrap(), 0.0);
}
