//! Nested Galerkin spaces spanned by the real Fourier basis.
//!
//! Canonical order: the constant first, then one representative wavevector per
//! conjugate pair (`kx > 0`, or `kx = 0` and `ky > 0`) sorted by `|k|^2`, then
//! `kx`, then `ky`; each representative contributes `cos(k.x)` then `sin(k.x)`.
//! The ordering is applied to every component alike.

use num_complex::Complex64;

use crate::field::{Grid, SpectralField};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisPart {
    Constant,
    Cos,
    Sin,
}

/// The real basis functions of `grid` in canonical order, as `(kx, ky, part)`.
pub fn canonical_modes(grid: Grid) -> Vec<(i64, i64, BasisPart)> {
    let h = (grid.n() / 2) as i64;
    let mut reps: Vec<(i64, i64)> = Vec::new();
    for kx in 0..h {
        for ky in (1 - h)..h {
            if kx > 0 || ky > 0 {
                reps.push((kx, ky));
            }
        }
    }
    reps.sort_by_key(|&(kx, ky)| (kx * kx + ky * ky, kx, ky));
    let mut out = vec![(0, 0, BasisPart::Constant)];
    for (kx, ky) in reps {
        out.push((kx, ky, BasisPart::Cos));
        out.push((kx, ky, BasisPart::Sin));
    }
    out
}

/// Number of real basis functions per component, `(n - 1)^2`.
pub fn mode_count(grid: Grid) -> usize {
    (grid.n() - 1).pow(2)
}

/// Orthogonal projection onto the first `n_keep` basis functions (per component).
/// `n_keep` beyond [`mode_count`] keeps everything.
pub fn truncate_modes(u: &SpectralField, n_keep: usize) -> SpectralField {
    let g = u.grid();
    let mut keep_re = vec![false; g.len()];
    let mut keep_im = vec![false; g.len()];
    for &(kx, ky, part) in canonical_modes(g).iter().take(n_keep) {
        let a = g.index_of(kx, ky).expect("canonical modes are representable");
        let b = g.index_of(-kx, -ky).expect("canonical modes are representable");
        match part {
            BasisPart::Constant | BasisPart::Cos => {
                keep_re[a] = true;
                keep_re[b] = true;
            }
            BasisPart::Sin => {
                keep_im[a] = true;
                keep_im[b] = true;
            }
        }
    }
    let coeffs = (0..u.components())
        .map(|c| {
            u.coeffs(c)
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    Complex64::new(if keep_re[i] { v.re } else { 0.0 }, if keep_im[i] { v.im } else { 0.0 })
                })
                .collect()
        })
        .collect();
    SpectralField::from_coeffs(g, coeffs)
        .expect("same shape")
        .with_solenoidal(u.is_solenoidal())
}
