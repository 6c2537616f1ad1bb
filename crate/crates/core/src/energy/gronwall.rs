use crate::error::{Error, Result};
use crate::field::Grid;
use crate::flow::TestTrajectory;

use super::weight::WeightSpec;

/// Running integral `I_k = int_0^{t_k} f` on a uniform grid.
///
/// Interval `[t_k, t_{k+1}]` uses the quadratic through three neighbouring
/// nodes, `(5 f_k + 8 f_{k+1} - f_{k+2}) h / 12` for even `k` and
/// `(-f_{k-1} + 8 f_k + 5 f_{k+1}) h / 12` otherwise, so at even nodes the
/// result is composite Simpson. Two nodes fall back to the trapezoid.
pub fn cumulative_integral(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let mut out = vec![0.0; n];
    for k in 0..n.saturating_sub(1) {
        let piece = if n == 2 {
            0.5 * h * (f[0] + f[1])
        } else if k % 2 == 0 && k + 2 < n {
            h * (5.0 * f[k] + 8.0 * f[k + 1] - f[k + 2]) / 12.0
        } else {
            h * (-f[k - 1] + 8.0 * f[k] + 5.0 * f[k + 1]) / 12.0
        };
        out[k + 1] = out[k] + piece;
    }
    out
}

/// Running trapezoid integral, used to estimate the quadrature error.
pub fn cumulative_trapezoid(f: &[f64], h: f64) -> Vec<f64> {
    let mut out = vec![0.0; f.len()];
    for k in 1..f.len() {
        out[k] = out[k - 1] + 0.5 * h * (f[k - 1] + f[k]);
    }
    out
}

/// Weight values and their running integral on a sample grid.
#[derive(Clone, Debug)]
pub struct GronwallWeights {
    pub times: Vec<f64>,
    pub k: Vec<f64>,
    /// `I(t_k) = int_0^{t_k} K`
    pub log_factor: Vec<f64>,
}

impl GronwallWeights {
    pub fn from_values(times: Vec<f64>, k: Vec<f64>) -> Self {
        let h = if times.len() > 1 { times[1] - times[0] } else { 0.0 };
        let log_factor = cumulative_integral(&k, h);
        GronwallWeights { times, k, log_factor }
    }

    pub fn new(vt: &TestTrajectory, w: &WeightSpec, nu: f64, grid: Grid, times: &[f64]) -> Result<Self> {
        w.validate(nu)?;
        let k = times
            .iter()
            .map(|&t| {
                let (v, _) = vt.eval(t, grid)?;
                w.eval(&v, nu)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_values(times.to_vec(), k))
    }

    /// `exp(int_{t_s}^{t_t} K)` between sample indices `s <= t`.
    pub fn factor(&self, s: usize, t: usize) -> Result<f64> {
        if s > t || t >= self.times.len() {
            return Err(Error::InvalidWeight(format!("factor needs s <= t within the grid, got {s}, {t}")));
        }
        Ok((self.log_factor[t] - self.log_factor[s]).exp())
    }

    /// Largest `K h`; when this is not small the quadrature of the discounted integrands is coarse.
    pub fn resolution(&self) -> f64 {
        let h = if self.times.len() > 1 { self.times[1] - self.times[0] } else { 0.0 };
        self.k.iter().fold(0.0f64, |m, &k| m.max(k * h))
    }
}

/// `exp(int_s^t K(v))` with the weight sampled on `times`; `s` and `t` must be sample times.
pub fn gronwall_factor(vt: &TestTrajectory, w: &WeightSpec, nu: f64, grid: Grid, times: &[f64], s: f64, t: f64) -> Result<f64> {
    if s > t {
        return Err(Error::InvalidWeight(format!("s = {s} > t = {t}")));
    }
    let find = |x: f64| {
        times
            .iter()
            .position(|&y| (y - x).abs() <= 1e-9 * (1.0 + x.abs()))
            .ok_or(Error::TimeOutOfRange { t: x, start: times[0], end: *times.last().unwrap_or(&0.0) })
    };
    let (i, j) = (find(s)?, find(t)?);
    GronwallWeights::new(vt, w, nu, grid, times)?.factor(i, j)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_is_simpson_at_even_nodes_and_exact_for_cubics() {
        let h = 0.1;
        let f: Vec<f64> = (0..11).map(|k| (k as f64 * h).powi(3) - 2.0 * (k as f64 * h)).collect();
        let c = cumulative_integral(&f, h);
        for (k, v) in c.iter().enumerate() {
            let t = k as f64 * h;
            let exact = t.powi(4) / 4.0 - t * t;
            // even nodes: Simpson, exact for cubics; odd nodes: third order
            let tol = if k % 2 == 0 { 1e-14 } else { 1e-4 };
            assert!((v - exact).abs() < tol, "k {k}: {v} vs {exact}");
        }
        let q: Vec<f64> = (0..7).map(|k| (k as f64 * h).powi(2)).collect();
        let c = cumulative_integral(&q, h);
        for (k, v) in c.iter().enumerate() {
            assert!((v - (k as f64 * h).powi(3) / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn constant_weight_gives_exponential() {
        let times: Vec<f64> = (0..21).map(|k| k as f64 * 0.05).collect();
        let g = GronwallWeights::from_values(times.clone(), vec![0.7; 21]);
        for s in 0..21 {
            for t in s..21 {
                let want = (0.7 * (times[t] - times[s])).exp();
                assert!((g.factor(s, t).unwrap() - want).abs() < 1e-10 * want);
            }
        }
        assert!(g.factor(3, 2).is_err());
    }

    #[test]
    fn factor_is_multiplicative_and_at_least_one() {
        let times: Vec<f64> = (0..17).map(|k| k as f64 / 16.0).collect();
        let k: Vec<f64> = times.iter().map(|t| (3.0 * t).sin().abs() + t * t).collect();
        let g = GronwallWeights::from_values(times, k);
        for (s, m, t) in [(0, 5, 16), (2, 3, 9), (1, 8, 8)] {
            let lhs = g.factor(s, t).unwrap();
            let rhs = g.factor(s, m).unwrap() * g.factor(m, t).unwrap();
            assert!((lhs - rhs).abs() < 1e-12 * lhs);
            assert!(lhs >= 1.0);
        }
    }

    #[test]
    fn zero_weight_path() {
        let grid = Grid::new(8).unwrap();
        let times = [0.0, 0.5, 1.0];
        let f = gronwall_factor(&TestTrajectory::Zero, &WeightSpec::euler(), 0.0, grid, &times, 0.0, 1.0).unwrap();
        assert_eq!(f, 1.0);
        assert!(gronwall_factor(&TestTrajectory::Zero, &WeightSpec::euler(), 0.0, grid, &times, 1.0, 0.5).is_err());
    }
}
