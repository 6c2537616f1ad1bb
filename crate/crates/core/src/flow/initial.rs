//! Initial data built from a streamfunction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{Grid, SpectralField};

/// `u = (d_y psi, -d_x psi)`, whose vorticity is `-lap psi`.
pub fn velocity_from_streamfunction(psi: &SpectralField) -> SpectralField {
    let g = psi.grad_scalar();
    SpectralField::stack(&[g.component(1), g.component(0).scale(-1.0)])
        .expect("components share a grid")
        .leray_project()
}

/// Velocity with the given scalar vorticity (its mean is discarded).
pub fn velocity_from_vorticity(omega: &SpectralField) -> SpectralField {
    let psi = omega.map_spectrum(|kx, ky| {
        let k2 = (kx * kx + ky * ky) as f64;
        if k2 == 0.0 {
            0.0
        } else {
            1.0 / k2
        }
    });
    velocity_from_streamfunction(&psi)
}

/// Two Gaussian vortices of opposite sign and core radius `radius`, centred at
/// `(2 pi / 3, pi)` and `(4 pi / 3, pi)`, with peak vorticity `amplitude`.
pub fn two_vortex(grid: Grid, amplitude: f64, radius: f64) -> SpectralField {
    let tau = std::f64::consts::TAU;
    // nearest periodic image
    let wrap = |d: f64| d - tau * (d / tau).round();
    let bump = move |x: f64, y: f64, cx: f64, cy: f64| {
        let (dx, dy) = (wrap(x - cx), wrap(y - cy));
        (-(dx * dx + dy * dy) / (2.0 * radius * radius)).exp()
    };
    let pi = std::f64::consts::PI;
    let omega = SpectralField::from_scalar_fn(grid, |x, y| {
        amplitude * (bump(x, y, 2.0 * pi / 3.0, pi) - bump(x, y, 4.0 * pi / 3.0, pi))
    });
    velocity_from_vorticity(&omega)
}

/// Solenoidal mean-free field with random modes `0 < |k|_inf <= kmax`, spectral
/// amplitudes decaying like `|k|^-2` in the streamfunction, scaled to unit L2 norm.
pub fn random_solenoidal(grid: Grid, kmax: i64, seed: u64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut modes = Vec::new();
    for kx in 0..=kmax {
        for ky in -kmax..=kmax {
            if kx == 0 && ky <= 0 {
                continue;
            }
            let k2 = (kx * kx + ky * ky) as f64;
            modes.push((kx as f64, ky as f64, rng.gen_range(-1.0..1.0) / k2, rng.gen_range(-1.0..1.0) / k2));
        }
    }
    let psi = SpectralField::from_scalar_fn(grid, |x, y| {
        modes.iter().map(|&(kx, ky, a, b)| a * (kx * x + ky * y).cos() + b * (kx * x + ky * y).sin()).sum()
    });
    let u = velocity_from_streamfunction(&psi);
    let norm = u.l2_norm();
    if norm > 0.0 {
        u.scale(1.0 / norm)
    } else {
        u
    }
}
