//! Periodic fields on the square torus `[0, 2pi)^2`.
//!
//! A [`SpectralField`] stores one array of Fourier coefficients per component.
//! Coefficients are indexed like the physical samples (`i * n + j`, first index
//! along x) and normalized so that `u(x) = sum_k u_hat(k) exp(i k.x)`. The
//! representable wavevectors are `k in {-n/2+1, ..., n/2-1}^2`; the Nyquist row
//! and column are stored but always zero, so that spectral differentiation is
//! exact and keeps the field real.

pub mod fft;
pub mod io;
mod norms;
mod ops;

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use norms::NormReport;
pub use ops::{dealias_mask_cutoff, gaussian_lowpass, sharp_lowpass};

/// Relative tolerance for the solenoidal tag: `max_k |k.u(k)| <= tol * max_k |u(k)|`.
pub const SOLENOIDAL_TOL: f64 = 1e-12;

/// Uniform n x n collocation grid on the torus of side `2 pi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GridRepr", into = "GridRepr")]
pub struct Grid {
    n: usize,
}

#[derive(Serialize, Deserialize)]
struct GridRepr {
    n: usize,
}

impl TryFrom<GridRepr> for Grid {
    type Error = Error;
    fn try_from(r: GridRepr) -> Result<Self> {
        Grid::new(r.n)
    }
}

impl From<Grid> for GridRepr {
    fn from(g: Grid) -> Self {
        GridRepr { n: g.n }
    }
}

impl Grid {
    /// Spatial dimension. Only the planar case is implemented.
    pub const DIM: usize = 2;

    pub fn new(n: usize) -> Result<Self> {
        if n < 4 || n % 2 != 0 {
            return Err(Error::InvalidGrid(format!("n = {n}; need an even n >= 4")));
        }
        Ok(Grid { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of collocation points (and of stored coefficients per component).
    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    pub fn coord(&self, i: usize) -> f64 {
        self.spacing() * i as f64
    }

    /// Area of the torus, `(2 pi)^2`.
    pub fn volume() -> f64 {
        4.0 * PI * PI
    }

    /// Signed wavenumber stored at array index `i`.
    pub fn wavenumber(&self, i: usize) -> i64 {
        let n = self.n as i64;
        let i = i as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    pub fn wavevector(&self, idx: usize) -> (i64, i64) {
        (self.wavenumber(idx / self.n), self.wavenumber(idx % self.n))
    }

    pub(crate) fn index_of_wavenumber(&self, k: i64) -> Option<usize> {
        let h = (self.n / 2) as i64;
        if k <= -h || k >= h {
            return None;
        }
        Some(if k >= 0 { k as usize } else { (k + self.n as i64) as usize })
    }

    /// Storage index of wavevector `(kx, ky)` if it is representable (Nyquist excluded).
    pub fn index_of(&self, kx: i64, ky: i64) -> Option<usize> {
        Some(self.index_of_wavenumber(kx)? * self.n + self.index_of_wavenumber(ky)?)
    }

    /// Index of the conjugate partner `-k`.
    pub(crate) fn partner(&self, idx: usize) -> usize {
        let n = self.n;
        let (i, j) = (idx / n, idx % n);
        ((n - i) % n) * n + (n - j) % n
    }

    pub(crate) fn is_nyquist(&self, idx: usize) -> bool {
        let h = self.n / 2;
        idx / self.n == h || idx % self.n == h
    }
}

/// Real scalar or vector field on the torus, held as Fourier coefficients.
#[derive(Clone, Debug)]
pub struct SpectralField {
    grid: Grid,
    coeffs: Vec<Vec<Complex64>>,
    solenoidal: bool,
}

impl SpectralField {
    pub fn zeros(grid: Grid, components: usize) -> Self {
        assert!(components >= 1, "a field needs at least one component");
        SpectralField {
            grid,
            coeffs: vec![vec![Complex64::new(0.0, 0.0); grid.len()]; components],
            solenoidal: components == Grid::DIM,
        }
    }

    /// Builds a field from coefficient arrays; Nyquist entries are dropped and
    /// Hermitian symmetry is imposed.
    pub fn from_coeffs(grid: Grid, coeffs: Vec<Vec<Complex64>>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::ShapeMismatch("no components".into()));
        }
        if let Some(c) = coeffs.iter().find(|c| c.len() != grid.len()) {
            return Err(Error::ShapeMismatch(format!(
                "component has {} coefficients, grid needs {}",
                c.len(),
                grid.len()
            )));
        }
        let mut f = SpectralField { grid, coeffs, solenoidal: false };
        f.enforce_hermitian();
        Ok(f)
    }

    pub(crate) fn from_coeffs_unchecked(grid: Grid, coeffs: Vec<Vec<Complex64>>) -> Self {
        debug_assert!(coeffs.iter().all(|c| c.len() == grid.len()));
        SpectralField { grid, coeffs, solenoidal: false }
    }

    /// Builds a field from row-major physical samples, one array per component.
    pub fn from_physical(grid: Grid, samples: &[Vec<f64>]) -> Result<Self> {
        let coeffs = samples
            .iter()
            .map(|s| {
                if s.len() != grid.len() {
                    Err(Error::ShapeMismatch(format!(
                        "{} samples for a {}x{} grid",
                        s.len(),
                        grid.n(),
                        grid.n()
                    )))
                } else {
                    Ok(fft::forward(grid.n(), s))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_coeffs(grid, coeffs)
    }

    /// Samples a scalar function at the collocation points.
    pub fn from_scalar_fn(grid: Grid, f: impl Fn(f64, f64) -> f64) -> Self {
        let n = grid.n();
        let s: Vec<f64> = (0..grid.len()).map(|idx| f(grid.coord(idx / n), grid.coord(idx % n))).collect();
        Self::from_physical(grid, &[s]).expect("sample count matches grid")
    }

    /// Samples a planar vector function at the collocation points.
    pub fn from_vector_fn(grid: Grid, f: impl Fn(f64, f64) -> (f64, f64)) -> Self {
        let n = grid.n();
        let mut a = Vec::with_capacity(grid.len());
        let mut b = Vec::with_capacity(grid.len());
        for idx in 0..grid.len() {
            let (u, v) = f(grid.coord(idx / n), grid.coord(idx % n));
            a.push(u);
            b.push(v);
        }
        Self::from_physical(grid, &[a, b]).expect("sample count matches grid")
    }

    /// Stacks scalar fields (or tensors) into one multi-component field.
    pub fn stack(parts: &[SpectralField]) -> Result<Self> {
        let grid = parts.first().ok_or_else(|| Error::ShapeMismatch("nothing to stack".into()))?.grid;
        let mut coeffs = Vec::new();
        for p in parts {
            if p.grid != grid {
                return Err(Error::ShapeMismatch("stacking fields on different grids".into()));
            }
            coeffs.extend(p.coeffs.iter().cloned());
        }
        Ok(SpectralField { grid, coeffs, solenoidal: false })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn n(&self) -> usize {
        self.grid.n()
    }

    pub fn components(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self, component: usize) -> &[Complex64] {
        &self.coeffs[component]
    }

    pub(crate) fn coeffs_mut(&mut self, component: usize) -> &mut [Complex64] {
        &mut self.coeffs[component]
    }

    pub fn component(&self, c: usize) -> SpectralField {
        SpectralField { grid: self.grid, coeffs: vec![self.coeffs[c].clone()], solenoidal: false }
    }

    pub fn coefficient(&self, component: usize, kx: i64, ky: i64) -> Complex64 {
        self.grid
            .index_of(kx, ky)
            .map(|i| self.coeffs[component][i])
            .unwrap_or_else(|| Complex64::new(0.0, 0.0))
    }

    /// Physical samples on the native grid, one row-major array per component.
    pub fn to_physical(&self) -> Vec<Vec<f64>> {
        self.coeffs.iter().map(|c| fft::inverse(self.n(), c)).collect()
    }

    /// Physical samples on a finer grid of side `m` (exact band-limited interpolation).
    pub fn physical_on(&self, m: usize) -> Result<Vec<Vec<f64>>> {
        Ok(self.pad_to(m)?.to_physical())
    }

    /// True when the field carries the solenoidal tag.
    pub fn is_solenoidal(&self) -> bool {
        self.solenoidal
    }

    /// `max_k |k.u(k)|` for a vector field.
    pub fn divergence_defect(&self) -> f64 {
        if self.components() != Grid::DIM {
            return f64::INFINITY;
        }
        (0..self.grid.len())
            .map(|idx| {
                let (kx, ky) = self.grid.wavevector(idx);
                (self.coeffs[0][idx] * kx as f64 + self.coeffs[1][idx] * ky as f64).norm()
            })
            .fold(0.0, f64::max)
    }

    /// Sets the solenoidal tag if the divergence defect is within [`SOLENOIDAL_TOL`].
    pub fn tag_solenoidal(mut self) -> Self {
        self.solenoidal = self.components() == Grid::DIM
            && self.divergence_defect() <= SOLENOIDAL_TOL * self.max_abs_coeff().max(f64::MIN_POSITIVE);
        self
    }

    pub(crate) fn with_solenoidal(mut self, flag: bool) -> Self {
        self.solenoidal = flag;
        self
    }

    pub fn all_finite(&self) -> bool {
        self.coeffs.iter().flatten().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Mean (the k = 0 coefficient) of each component.
    pub fn mean(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c[0].re).collect()
    }

    /// Imposes `u(-k) = conj(u(k))` and zeroes the Nyquist row and column.
    pub fn enforce_hermitian(&mut self) {
        let g = self.grid;
        for c in &mut self.coeffs {
            let old = c.clone();
            for (idx, v) in c.iter_mut().enumerate() {
                if g.is_nyquist(idx) {
                    *v = Complex64::new(0.0, 0.0);
                } else {
                    *v = 0.5 * (old[idx] + old[g.partner(idx)].conj());
                }
            }
        }
    }

    pub fn same_shape(&self, other: &SpectralField) -> Result<()> {
        if self.grid != other.grid || self.components() != other.components() {
            return Err(Error::ShapeMismatch(format!(
                "({} comps, n = {}) vs ({} comps, n = {})",
                self.components(),
                self.n(),
                other.components(),
                other.n()
            )));
        }
        Ok(())
    }

    /// `self + a * other`
    pub fn axpy(&self, a: f64, other: &SpectralField) -> Result<SpectralField> {
        self.same_shape(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p + q * a).collect())
            .collect();
        Ok(SpectralField { grid: self.grid, coeffs, solenoidal: self.solenoidal && other.solenoidal })
    }

    pub fn scale(&self, a: f64) -> SpectralField {
        let coeffs = self.coeffs.iter().map(|x| x.iter().map(|p| p * a).collect()).collect();
        SpectralField { grid: self.grid, coeffs, solenoidal: self.solenoidal }
    }

    /// Multiplies each coefficient by a real spectral multiplier `m(kx, ky)`.
    pub fn map_spectrum(&self, m: impl Fn(i64, i64) -> f64) -> SpectralField {
        let g = self.grid;
        let mult: Vec<f64> = (0..g.len())
            .map(|idx| {
                let (kx, ky) = g.wavevector(idx);
                m(kx, ky)
            })
            .collect();
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.iter().zip(&mult).map(|(v, w)| v * w).collect())
            .collect();
        SpectralField { grid: g, coeffs, solenoidal: self.solenoidal }
    }

    /// Weighted combination `sum_i w_i f_i` of fields sharing one shape.
    pub fn combination(weights: &[f64], fields: &[&SpectralField]) -> Result<SpectralField> {
        let first = fields.first().ok_or_else(|| Error::ShapeMismatch("empty combination".into()))?;
        let mut acc = SpectralField::zeros(first.grid, first.components());
        acc.solenoidal = true;
        for (w, f) in weights.iter().zip(fields) {
            acc = acc.axpy(*w, f)?;
        }
        Ok(acc)
    }

    /// Largest coefficient difference to another field of the same shape.
    pub fn max_coeff_diff(&self, other: &SpectralField) -> Result<f64> {
        self.same_shape(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(p, q)| (p - q).norm()))
            .fold(0.0, f64::max))
    }
}

impl Add for &SpectralField {
    type Output = SpectralField;
    fn add(self, rhs: &SpectralField) -> SpectralField {
        self.axpy(1.0, rhs).expect("adding fields of different shape")
    }
}

impl Sub for &SpectralField {
    type Output = SpectralField;
    fn sub(self, rhs: &SpectralField) -> SpectralField {
        self.axpy(-1.0, rhs).expect("subtracting fields of different shape")
    }
}

impl Mul<f64> for &SpectralField {
    type Output = SpectralField;
    fn mul(self, a: f64) -> SpectralField {
        self.scale(a)
    }
}

impl Neg for &SpectralField {
    type Output = SpectralField;
    fn neg(self) -> SpectralField {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_rejects_odd_and_small() {
        assert!(Grid::new(3).is_err());
        assert!(Grid::new(2).is_err());
        assert!(Grid::new(7).is_err());
        assert!(Grid::new(4).is_ok());
    }

    #[test]
    fn wavenumber_layout() {
        let g = Grid::new(8).unwrap();
        let ks: Vec<i64> = (0..8).map(|i| g.wavenumber(i)).collect();
        assert_eq!(ks, vec![0, 1, 2, 3, -4, -3, -2, -1]);
        assert_eq!(g.index_of(4, 0), None);
        assert_eq!(g.index_of(-3, 1), Some(5 * 8 + 1));
        let idx = g.index_of(2, -1).unwrap();
        assert_eq!(g.wavevector(g.partner(idx)), (-2, 1));
    }

    #[test]
    fn physical_roundtrip_and_real_mean() {
        let g = Grid::new(16).unwrap();
        let f = SpectralField::from_vector_fn(g, |x, y| (x.sin() * (2.0 * y).cos() + 0.3, (x + y).cos()));
        let back = SpectralField::from_physical(g, &f.to_physical()).unwrap();
        assert!(f.max_coeff_diff(&back).unwrap() < 1e-14);
        assert!((f.mean()[0] - 0.3).abs() < 1e-14);
        assert_eq!(f.coeffs(0)[0].im, 0.0);
    }

    #[test]
    fn nyquist_content_is_dropped() {
        let g = Grid::new(8).unwrap();
        let f = SpectralField::from_scalar_fn(g, |x, _| (4.0 * x).cos());
        assert!(f.max_abs_coeff() < 1e-15);
    }

    #[test]
    fn hermitian_symmetry_holds_exactly() {
        let g = Grid::new(12).unwrap();
        let f = SpectralField::from_scalar_fn(g, |x, y| (x * 3.0 + y).sin() + (2.0 * y).cos() * x.cos());
        for idx in 0..g.len() {
            let a = f.coeffs(0)[idx];
            let b = f.coeffs(0)[g.partner(idx)];
            assert_eq!(a, b.conj());
        }
    }
}
