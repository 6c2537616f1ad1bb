use num_complex::Complex64;

use super::{fft, Grid, SpectralField};
use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Largest retained wavenumber per axis under the 2/3 rule: `|k| < n/3`.
pub fn dealias_mask_cutoff(n: usize) -> i64 {
    (n as f64 / 3.0).ceil() as i64 - 1
}

/// Zeroes every mode with `max(|kx|, |ky|) > kmax`.
pub fn sharp_lowpass(u: &SpectralField, kmax: i64) -> SpectralField {
    u.map_spectrum(|kx, ky| if kx.abs() <= kmax && ky.abs() <= kmax { 1.0 } else { 0.0 })
}

/// Convolution with a periodized Gaussian of width `sigma` (a positive kernel).
pub fn gaussian_lowpass(u: &SpectralField, sigma: f64) -> SpectralField {
    let s2 = 0.5 * sigma * sigma;
    u.map_spectrum(|kx, ky| (-s2 * (kx * kx + ky * ky) as f64).exp())
}

impl SpectralField {
    /// Leray projection `(I - k k^T / |k|^2) u(k)`; the mean mode passes through.
    pub fn leray_project(&self) -> SpectralField {
        assert_eq!(self.components(), Grid::DIM, "Leray projection needs a vector field");
        let g = self.grid();
        let mut a = self.coeffs(0).to_vec();
        let mut b = self.coeffs(1).to_vec();
        for idx in 1..g.len() {
            let (kx, ky) = g.wavevector(idx);
            let k2 = (kx * kx + ky * ky) as f64;
            if k2 == 0.0 {
                continue;
            }
            let (kx, ky) = (kx as f64, ky as f64);
            let dot = (a[idx] * kx + b[idx] * ky) / k2;
            a[idx] -= dot * kx;
            b[idx] -= dot * ky;
        }
        let mut out = self.clone();
        out.coeffs_mut(0).copy_from_slice(&a);
        out.coeffs_mut(1).copy_from_slice(&b);
        out.with_solenoidal(true)
    }

    /// Spectral gradient of every component: `[d_x u0, d_y u0, d_x u1, d_y u1, ...]`.
    pub fn gradient(&self) -> SpectralField {
        let g = self.grid();
        let mut out = Vec::with_capacity(2 * self.components());
        for c in 0..self.components() {
            let src = self.coeffs(c);
            let mut dx = vec![Complex64::new(0.0, 0.0); g.len()];
            let mut dy = dx.clone();
            for idx in 0..g.len() {
                let (kx, ky) = g.wavevector(idx);
                dx[idx] = I * kx as f64 * src[idx];
                dy[idx] = I * ky as f64 * src[idx];
            }
            out.push(dx);
            out.push(dy);
        }
        SpectralField::from_raw(g, out)
    }

    pub fn divergence(&self) -> SpectralField {
        assert_eq!(self.components(), Grid::DIM, "divergence needs a vector field");
        let g = self.grid();
        let d = (0..g.len())
            .map(|idx| {
                let (kx, ky) = g.wavevector(idx);
                I * (kx as f64 * self.coeffs(0)[idx] + ky as f64 * self.coeffs(1)[idx])
            })
            .collect();
        SpectralField::from_raw(g, vec![d])
    }

    pub fn laplacian(&self) -> SpectralField {
        self.map_spectrum(|kx, ky| -((kx * kx + ky * ky) as f64))
    }

    /// Scalar curl `d_x u1 - d_y u0`.
    pub fn vorticity(&self) -> SpectralField {
        let gr = self.gradient();
        let w = gr.coeffs(2).iter().zip(gr.coeffs(1)).map(|(a, b)| a - b).collect();
        SpectralField::from_raw(self.grid(), vec![w])
    }

    /// Gradient of a scalar field as a vector field.
    pub fn grad_scalar(&self) -> SpectralField {
        assert_eq!(self.components(), 1, "grad_scalar needs a scalar field");
        self.gradient()
    }

    /// L2 pairing `sum_c int u_c w_c dx`, evaluated by Parseval.
    pub fn inner(&self, other: &SpectralField) -> Result<f64> {
        self.same_shape(other)?;
        let s: f64 = (0..self.components())
            .map(|c| {
                self.coeffs(c)
                    .iter()
                    .zip(other.coeffs(c))
                    .map(|(a, b)| a.re * b.re + a.im * b.im)
                    .sum::<f64>()
            })
            .sum();
        Ok(Grid::volume() * s)
    }

    /// Zero-padded spectrum on an m x m grid (band-limited interpolation).
    pub fn pad_to(&self, m: usize) -> Result<SpectralField> {
        let n = self.n();
        if m < n {
            return Err(Error::PadTooSmall { from: n, to: m });
        }
        let target = Grid::new(m)?;
        if m == n {
            return Ok(self.clone());
        }
        let g = self.grid();
        let mut out = Vec::with_capacity(self.components());
        for c in 0..self.components() {
            let mut dst = vec![Complex64::new(0.0, 0.0); target.len()];
            for (idx, v) in self.coeffs(c).iter().enumerate() {
                if g.is_nyquist(idx) {
                    continue;
                }
                let (kx, ky) = g.wavevector(idx);
                let j = target.index_of(kx, ky).expect("padding only adds modes");
                dst[j] = *v;
            }
            out.push(dst);
        }
        Ok(SpectralField::from_raw(target, out).with_solenoidal(self.is_solenoidal()))
    }

    /// Spectral truncation onto an m x m grid (m <= n), dropping modes with `|k| >= m/2`.
    pub fn truncate_to(&self, m: usize) -> Result<SpectralField> {
        let n = self.n();
        if m > n {
            return self.pad_to(m);
        }
        let target = Grid::new(m)?;
        let mut out = Vec::with_capacity(self.components());
        for c in 0..self.components() {
            let mut dst = vec![Complex64::new(0.0, 0.0); target.len()];
            for (j, v) in dst.iter_mut().enumerate() {
                if target.is_nyquist(j) {
                    continue;
                }
                let (kx, ky) = target.wavevector(j);
                if let Some(i) = self.grid().index_of(kx, ky) {
                    *v = self.coeffs(c)[i];
                }
            }
            out.push(dst);
        }
        Ok(SpectralField::from_raw(target, out).with_solenoidal(self.is_solenoidal()))
    }

    /// Resamples onto an m x m grid, padding or truncating as needed.
    pub fn resample(&self, m: usize) -> Result<SpectralField> {
        if m >= self.n() {
            self.pad_to(m)
        } else {
            self.truncate_to(m)
        }
    }

    /// Samples of every component on the 2n grid, where products of two
    /// band-limited fields are represented without aliasing.
    pub(crate) fn fine_samples(&self) -> Vec<Vec<f64>> {
        self.physical_on(2 * self.n()).expect("2n is a valid grid")
    }

    /// Projects 2n-grid samples back onto the native spectrum (exact for products of two native fields).
    pub(crate) fn from_fine_samples(grid: Grid, samples: &[Vec<f64>]) -> SpectralField {
        let m = 2 * grid.n();
        let fine = Grid::new(m).expect("2n is a valid grid");
        let coeffs = samples.iter().map(|s| fft::forward(m, s)).collect();
        let mut f = SpectralField::from_raw(fine, coeffs);
        f.enforce_hermitian();
        f.truncate_to(grid.n()).expect("truncation to a smaller grid")
    }

    /// Convective term `(a . grad) b`, computed with exact products.
    pub fn convect(&self, b: &SpectralField) -> Result<SpectralField> {
        if self.components() != Grid::DIM || b.grid() != self.grid() {
            return Err(Error::ShapeMismatch("convect needs a vector field on the same grid".into()));
        }
        let a = self.fine_samples();
        let gb = b.gradient().fine_samples();
        let out: Vec<Vec<f64>> = (0..b.components())
            .map(|c| {
                (0..a[0].len())
                    .map(|p| a[0][p] * gb[2 * c][p] + a[1][p] * gb[2 * c + 1][p])
                    .collect()
            })
            .collect();
        Ok(SpectralField::from_fine_samples(self.grid(), &out))
    }

    /// Outer product `a (x) b` of two vector fields as `(ab11, ab12, ab21, ab22)`, exact.
    pub fn outer(&self, b: &SpectralField) -> Result<SpectralField> {
        if self.components() != Grid::DIM {
            return Err(Error::ShapeMismatch("outer product needs vector fields".into()));
        }
        self.same_shape(b)?;
        let a = self.fine_samples();
        let bs = b.fine_samples();
        let mut out = Vec::with_capacity(4);
        for i in 0..2 {
            for j in 0..2 {
                out.push(a[i].iter().zip(&bs[j]).map(|(x, y)| x * y).collect::<Vec<f64>>());
            }
        }
        Ok(SpectralField::from_fine_samples(self.grid(), &out))
    }

    pub(crate) fn from_raw(grid: Grid, coeffs: Vec<Vec<Complex64>>) -> SpectralField {
        SpectralField::from_coeffs_unchecked(grid, coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn g(n: usize) -> Grid {
        Grid::new(n).unwrap()
    }

    fn tg(grid: Grid) -> SpectralField {
        SpectralField::from_vector_fn(grid, |x, y| (x.sin() * y.cos(), -x.cos() * y.sin()))
    }

    #[test]
    fn gradient_of_sine_is_cosine() {
        let f = SpectralField::from_scalar_fn(g(16), |x, _| x.sin());
        let d = f.gradient().to_physical();
        for (idx, v) in d[0].iter().enumerate() {
            let x = g(16).coord(idx / 16);
            assert!((v - x.cos()).abs() < 1e-13);
        }
        assert!(d[1].iter().all(|v| v.abs() < 1e-13));
    }

    #[test]
    fn constant_has_zero_gradient() {
        let f = SpectralField::from_scalar_fn(g(8), |_, _| 3.5);
        assert!(f.gradient().max_abs_coeff() < 1e-15);
    }

    #[test]
    fn tg_strain_is_traceless() {
        let gr = tg(g(16)).gradient();
        let tr = &gr.component(0) + &gr.component(3);
        assert!(tr.max_abs_coeff() < 1e-15);
    }

    #[test]
    fn leray_kills_gradient_and_keeps_tg() {
        let phi = SpectralField::from_scalar_fn(g(16), |x, y| x.sin() * y.sin());
        assert!(phi.gradient().leray_project().max_abs_coeff() < 1e-15);
        let u = tg(g(16));
        assert!(u.leray_project().max_coeff_diff(&u).unwrap() < 1e-14);
    }

    #[test]
    fn leray_on_single_mode() {
        // (sin x, 0) lives at k = (+-1, 0), parallel to k: the projection removes it.
        let u = SpectralField::from_vector_fn(g(8), |x, _| (x.sin(), 0.0));
        assert!(u.leray_project().max_abs_coeff() < 1e-16);
        // (sin(x + y), 0) at k = (1, 1): P keeps ((1, -1) / 2) sin(x + y).
        let u = SpectralField::from_vector_fn(g(8), |x, y| ((x + y).sin(), 0.0));
        let p = u.leray_project().to_physical();
        for idx in 0..64 {
            let s = (g(8).coord(idx / 8) + g(8).coord(idx % 8)).sin();
            assert!((p[0][idx] - 0.5 * s).abs() < 1e-14);
            assert!((p[1][idx] + 0.5 * s).abs() < 1e-14);
        }
    }

    #[test]
    fn inner_products() {
        let s = SpectralField::from_scalar_fn(g(8), |x, _| x.sin());
        let c = SpectralField::from_scalar_fn(g(8), |x, _| x.cos());
        assert!(s.inner(&c).unwrap().abs() < 1e-14);
        assert!((s.inner(&s).unwrap() - 2.0 * PI * PI).abs() < 1e-12);
        let phi = SpectralField::from_scalar_fn(g(16), |x, y| (2.0 * x).cos() * y.sin());
        assert!(tg(g(16)).inner(&phi.gradient()).unwrap().abs() < 1e-13);
    }

    #[test]
    fn pad_truncate_roundtrip() {
        let u = tg(g(16));
        let p = u.pad_to(32).unwrap();
        assert!(p.truncate_to(16).unwrap().max_coeff_diff(&u).unwrap() == 0.0);
        assert!(p.max_coeff_diff(&tg(g(32))).unwrap() < 1e-15);
        assert!(u.pad_to(8).is_err());
        let l2a = u.inner(&u).unwrap();
        let l2b = p.inner(&p).unwrap();
        assert!((l2a - l2b).abs() < 1e-14 * l2a);
    }

    #[test]
    fn tg_convection_is_a_gradient() {
        let u = tg(g(16));
        let c = u.convect(&u).unwrap();
        assert!(c.leray_project().max_abs_coeff() < 1e-15);
        // (u.grad)u = -grad((cos 2x + cos 2y) / 4) ... = (-sin 2x / 2, -sin 2y / 2) * (-1)
        let cp = c.to_physical();
        for idx in 0..256 {
            let (x, y) = (g(16).coord(idx / 16), g(16).coord(idx % 16));
            assert!((cp[0][idx] - 0.5 * (2.0 * x).sin()).abs() < 1e-13);
            assert!((cp[1][idx] - 0.5 * (2.0 * y).sin()).abs() < 1e-13);
        }
    }

    #[test]
    fn dealias_cutoff() {
        assert_eq!(dealias_mask_cutoff(32), 10);
        assert_eq!(dealias_mask_cutoff(24), 7);
        assert_eq!(dealias_mask_cutoff(16), 5);
    }
}
