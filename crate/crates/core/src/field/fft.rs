//! Cached 2D complex FFTs on square n x n arrays.
//!
//! Layout: entry `(i, j)` sits at `i * n + j`; the first index runs along x,
//! the second along y. The forward transform carries the `1/n^2` factor so
//! that `u(x) = sum_k u_hat(k) exp(i k.x)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

type Plans = (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>);

fn plans(n: usize) -> Plans {
    static CACHE: OnceLock<Mutex<HashMap<usize, Plans>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("fft plan cache poisoned");
    guard
        .entry(n)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            (planner.plan_fft_forward(n), planner.plan_fft_inverse(n))
        })
        .clone()
}

fn transform(data: &mut [Complex64], n: usize, fft: &Arc<dyn Fft<f64>>) {
    debug_assert_eq!(data.len(), n * n);
    // rows (contiguous, y direction)
    fft.process(data);
    // columns (x direction) through a transpose
    let mut t = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            t[j * n + i] = data[i * n + j];
        }
    }
    fft.process(&mut t);
    for i in 0..n {
        for j in 0..n {
            data[i * n + j] = t[j * n + i];
        }
    }
}

/// Physical samples to Fourier coefficients (normalized by `1/n^2`).
pub fn forward(n: usize, physical: &[f64]) -> Vec<Complex64> {
    let mut data: Vec<Complex64> = physical.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let (fwd, _) = plans(n);
    transform(&mut data, n, &fwd);
    let scale = 1.0 / (n * n) as f64;
    data.iter_mut().for_each(|c| *c *= scale);
    data
}

/// Fourier coefficients to (real parts of) physical samples.
pub fn inverse(n: usize, coeffs: &[Complex64]) -> Vec<f64> {
    let mut data = coeffs.to_vec();
    let (_, inv) = plans(n);
    transform(&mut data, n, &inv);
    data.into_iter().map(|c| c.re).collect()
}
