//! Closed-form Taylor-Green vortex.

use crate::field::{Grid, SpectralField};

/// Unit-amplitude Taylor-Green velocity `(sin x cos y, -cos x sin y)`.
pub fn tg_shape(grid: Grid) -> SpectralField {
    SpectralField::from_vector_fn(grid, |x, y| (x.sin() * y.cos(), -x.cos() * y.sin())).leray_project()
}

/// `e^{-2 nu t} (sin x cos y, -cos x sin y)`, an exact unforced solution.
pub fn taylor_green(t: f64, nu: f64, grid: Grid) -> SpectralField {
    tg_shape(grid).scale((-2.0 * nu * t).exp())
}

/// Pressure paired with [`taylor_green`]: `(cos 2x + cos 2y) e^{-4 nu t} / 4`.
pub fn taylor_green_pressure(t: f64, nu: f64, grid: Grid) -> SpectralField {
    let d = 0.25 * (-4.0 * nu * t).exp();
    SpectralField::from_scalar_fn(grid, |x, y| d * ((2.0 * x).cos() + (2.0 * y).cos()))
}

/// Amplitude `g(t)` of the exact solution `g(t) U` under forcing `A cos(omega t) U`,
/// started from `g(0) = a0`: `g' = -2 nu g + A cos(omega t)`.
pub fn forced_tg_amplitude(a0: f64, nu: f64, amplitude: f64, omega: f64, t: f64) -> f64 {
    let den = 4.0 * nu * nu + omega * omega;
    if den == 0.0 {
        return a0 + amplitude * t;
    }
    let steady = |t: f64| amplitude * (2.0 * nu * (omega * t).cos() + omega * (omega * t).sin()) / den;
    (-2.0 * nu * t).exp() * (a0 - steady(0.0)) + steady(t)
}

/// Time derivative of [`forced_tg_amplitude`].
pub fn forced_tg_amplitude_rate(a0: f64, nu: f64, amplitude: f64, omega: f64, t: f64) -> f64 {
    -2.0 * nu * forced_tg_amplitude(a0, nu, amplitude, omega, t) + amplitude * (omega * t).cos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn initial_energy_is_pi_squared() {
        let v = taylor_green(0.0, 0.3, Grid::new(16).unwrap());
        assert!((0.5 * v.l2_norm().powi(2) - PI * PI).abs() < 1e-12);
        assert!(v.divergence().max_abs_coeff() < 1e-14);
    }

    #[test]
    fn momentum_residual_vanishes() {
        let (nu, t) = (0.07, 0.4);
        let g = Grid::new(16).unwrap();
        let v = taylor_green(t, nu, g);
        let dvdt = v.scale(-2.0 * nu);
        let p = taylor_green_pressure(t, nu, g);
        let r = dvdt
            .axpy(1.0, &v.convect(&v).unwrap())
            .unwrap()
            .axpy(-nu, &v.laplacian())
            .unwrap()
            .axpy(1.0, &p.gradient())
            .unwrap();
        let rp = r.to_physical();
        assert!(rp.iter().flatten().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn forced_amplitude_solves_ode() {
        let (a0, nu, a, w) = (0.7, 0.05, 0.3, 2.0);
        let h = 1e-5;
        for t in [0.0, 0.3, 1.1] {
            let fd = (forced_tg_amplitude(a0, nu, a, w, t + h) - forced_tg_amplitude(a0, nu, a, w, t - h)) / (2.0 * h);
            assert!((fd - forced_tg_amplitude_rate(a0, nu, a, w, t)).abs() < 1e-9);
        }
        assert!((forced_tg_amplitude(a0, nu, a, w, 0.0) - a0).abs() < 1e-15);
    }
}
