use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::SpectralField;

/// Mean-free pressure from `-lap p = d_i d_j (v_i v_j) - div f`.
pub fn recover_pressure(v: &SpectralField, f: &SpectralField) -> Result<SpectralField> {
    v.same_shape(f)?;
    if v.components() != 2 {
        return Err(Error::ShapeMismatch("pressure recovery needs vector fields".into()));
    }
    let q = v.outer(v)?;
    let g = v.grid();
    let i = Complex64::new(0.0, 1.0);
    let p = (0..g.len())
        .map(|idx| {
            let (kx, ky) = g.wavevector(idx);
            let k2 = (kx * kx + ky * ky) as f64;
            if k2 == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let (kx, ky) = (kx as f64, ky as f64);
            let kqk = kx * kx * q.coeffs(0)[idx]
                + kx * ky * (q.coeffs(1)[idx] + q.coeffs(2)[idx])
                + ky * ky * q.coeffs(3)[idx];
            let kf = kx * f.coeffs(0)[idx] + ky * f.coeffs(1)[idx];
            -(kqk + i * kf) / k2
        })
        .collect();
    SpectralField::from_coeffs(g, vec![p])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Grid;
    use crate::flow::taylor_green::{taylor_green, taylor_green_pressure};

    #[test]
    fn tg_pressure() {
        let g = Grid::new(16).unwrap();
        let v = taylor_green(0.3, 0.1, g);
        let p = recover_pressure(&v, &SpectralField::zeros(g, 2)).unwrap();
        assert!(p.max_coeff_diff(&taylor_green_pressure(0.3, 0.1, g)).unwrap() < 1e-15);
        assert_eq!(p.mean()[0], 0.0);
    }

    #[test]
    fn gradient_forcing_returns_potential() {
        let g = Grid::new(16).unwrap();
        let phi = SpectralField::from_scalar_fn(g, |x, y| 2.0 + (x + y).sin() - (3.0 * y).cos());
        let p = recover_pressure(&SpectralField::zeros(g, 2), &phi.gradient()).unwrap();
        let mut expect = phi.clone();
        expect.coeffs_mut(0)[0] = Complex64::new(0.0, 0.0);
        assert!(p.max_coeff_diff(&expect).unwrap() < 1e-15);
    }
}
