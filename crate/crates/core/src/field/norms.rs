use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Grid, SpectralField};
use crate::error::{Error, Result};

/// The norms the relative-energy calculus asks for, gathered in one place.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub l2: f64,
    pub h1_semi: f64,
    /// Keyed by the exponent formatted with `{}` (e.g. `"4"`).
    pub lp: BTreeMap<String, f64>,
    pub l_inf: f64,
    /// `None` when the field has a nonzero mean.
    pub h_minus1: Option<f64>,
}

impl SpectralField {
    pub fn l2_norm(&self) -> f64 {
        self.inner(self).expect("same shape").max(0.0).sqrt()
    }

    /// `||grad u||_{L2}`.
    pub fn h1_seminorm(&self) -> f64 {
        let g = self.grid();
        let s: f64 = (0..self.components())
            .map(|c| {
                self.coeffs(c)
                    .iter()
                    .enumerate()
                    .map(|(idx, v)| {
                        let (kx, ky) = g.wavevector(idx);
                        (kx * kx + ky * ky) as f64 * v.norm_sqr()
                    })
                    .sum::<f64>()
            })
            .sum();
        (Grid::volume() * s).sqrt()
    }

    /// `L^p` norm of the pointwise Euclidean magnitude. `p = 2` uses Parseval, other
    /// exponents use quadrature on the 2n grid, `p = inf` takes the max over it.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidExponent(p));
        }
        if p == 2.0 {
            return Ok(self.l2_norm());
        }
        let samples = self.fine_samples();
        let mags = (0..samples[0].len()).map(|i| samples.iter().map(|c| c[i] * c[i]).sum::<f64>().sqrt());
        if p.is_infinite() {
            return Ok(mags.fold(0.0, f64::max));
        }
        let h = std::f64::consts::PI / self.n() as f64;
        let s: f64 = mags.map(|m| m.powf(p)).sum();
        Ok((s * h * h).powf(1.0 / p))
    }

    pub fn linf_norm(&self) -> f64 {
        self.lp_norm(f64::INFINITY).expect("infinity is a valid exponent")
    }

    /// `(sum_{k != 0} |u(k)|^2 / |k|^2)^{1/2}` scaled like the L2 norm.
    pub fn h_minus1_norm(&self) -> Result<f64> {
        let scale = self.max_abs_coeff();
        for c in 0..self.components() {
            let m = self.coeffs(c)[0].norm();
            if m > 1e-14 * scale.max(f64::MIN_POSITIVE) && m > 0.0 {
                return Err(Error::NonzeroMean(m));
            }
        }
        let g = self.grid();
        let s: f64 = (0..self.components())
            .map(|c| {
                self.coeffs(c)
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(idx, v)| {
                        let (kx, ky) = g.wavevector(idx);
                        v.norm_sqr() / (kx * kx + ky * ky) as f64
                    })
                    .sum::<f64>()
            })
            .sum();
        Ok((Grid::volume() * s).sqrt())
    }

    pub fn norm_report(&self, exponents: &[f64]) -> Result<NormReport> {
        let mut lp = BTreeMap::new();
        for &p in exponents {
            lp.insert(format!("{p}"), self.lp_norm(p)?);
        }
        Ok(NormReport {
            l2: self.l2_norm(),
            h1_semi: self.h1_seminorm(),
            lp,
            l_inf: self.linf_norm(),
            h_minus1: self.h_minus1_norm().ok(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn g(n: usize) -> Grid {
        Grid::new(n).unwrap()
    }

    #[test]
    fn sine_l2() {
        let u = SpectralField::from_scalar_fn(g(8), |x, _| x.sin());
        assert!((u.l2_norm() - (2.0 * PI * PI).sqrt()).abs() < 1e-13);
        assert!((u.h_minus1_norm().unwrap() - u.l2_norm()).abs() < 1e-13);
        let u4 = SpectralField::from_scalar_fn(g(16), |x, _| (4.0 * x).sin());
        assert!((u4.h_minus1_norm().unwrap() - u4.l2_norm() / 4.0).abs() < 1e-13);
    }

    #[test]
    fn zero_norms() {
        let z = SpectralField::zeros(g(8), 2);
        for p in [1.0, 2.0, 3.0, 4.0, f64::INFINITY] {
            assert_eq!(z.lp_norm(p).unwrap(), 0.0);
        }
        assert_eq!(z.h_minus1_norm().unwrap(), 0.0);
    }

    #[test]
    fn invalid_exponent_and_mean() {
        let u = SpectralField::from_scalar_fn(g(8), |x, _| 1.0 + x.sin());
        assert!(matches!(u.lp_norm(0.5), Err(Error::InvalidExponent(_))));
        assert!(matches!(u.h_minus1_norm(), Err(Error::NonzeroMean(_))));
    }

    #[test]
    fn tg_l4_against_fine_reference() {
        let tg = |x: f64, y: f64| (x.sin() * y.cos(), -x.cos() * y.sin());
        let u = SpectralField::from_vector_fn(g(16), tg);
        // plain midpoint quadrature on 512^2 is exact for trigonometric polynomials of this degree
        let m = 512;
        let h = 2.0 * PI / m as f64;
        let mut s = 0.0;
        for i in 0..m {
            for j in 0..m {
                let (a, b) = tg(i as f64 * h, j as f64 * h);
                s += (a * a + b * b).powi(2);
            }
        }
        let reference = s * h * h;
        let ours = u.lp_norm(4.0).unwrap().powi(4);
        assert!((ours - reference).abs() < 1e-10);
        assert!((ours - 1.25 * PI * PI).abs() < 1e-10);
    }

    #[test]
    fn parseval_matches_quadrature() {
        let u = SpectralField::from_vector_fn(g(16), |x, y| ((x + 2.0 * y).cos() + 0.2, (3.0 * x).sin() * y.cos()));
        let s = u.to_physical();
        let h = 2.0 * PI / 16.0;
        let q: f64 = s.iter().flatten().map(|v| v * v).sum::<f64>() * h * h;
        assert!((q.sqrt() - u.l2_norm()).abs() < 1e-12);
    }

    #[test]
    fn tg_norm_report() {
        let u = SpectralField::from_vector_fn(g(16), |x, y| (x.sin() * y.cos(), -x.cos() * y.sin()));
        let r = u.norm_report(&[4.0]).unwrap();
        assert!((r.l2 * r.l2 - 2.0 * PI * PI).abs() < 1e-12);
        assert!((r.h1_semi * r.h1_semi - 4.0 * PI * PI).abs() < 1e-12);
        assert!((r.l_inf - 1.0).abs() < 1e-12);
        assert!(r.h_minus1.is_some());
    }
}
