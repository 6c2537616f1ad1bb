use serde::{Deserialize, Serialize};

use crate::energy::cumulative_integral;
use crate::error::{Error, Result};
use crate::flow::{TestTrajectory, Trajectory};

use super::margin::series;
use super::CertificateConfig;

/// Nonincreasing time weight with `phi(0) = 1` and `phi(T) = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PhiWeight {
    /// `1 - t / T`
    Ramp,
    /// 1 on `[0, t]`, smooth (`C^2`) descent to 0 on `[t, t + width]`.
    Indicator { t: f64, width: f64 },
    /// `phi = value` everywhere; only admissible if that were 1 and 0 at once.
    Constant { value: f64 },
}

fn smoothstep(x: f64) -> (f64, f64) {
    let x = x.clamp(0.0, 1.0);
    (x * x * x * (10.0 + x * (-15.0 + 6.0 * x)), 30.0 * x * x * (1.0 - x) * (1.0 - x))
}

impl PhiWeight {
    /// `(phi(s), phi'(s))` on `[0, T]`.
    pub fn eval(&self, s: f64, t_end: f64) -> (f64, f64) {
        match *self {
            PhiWeight::Ramp => (1.0 - s / t_end, -1.0 / t_end),
            PhiWeight::Indicator { t, width } => {
                let (v, d) = smoothstep((s - t) / width);
                (1.0 - v, -d / width)
            }
            PhiWeight::Constant { value } => (value, 0.0),
        }
    }

    /// Checks `phi(0) = 1`, `phi(T) = 0`, `phi >= 0`, `phi' <= 0` on the sample grid.
    pub fn check(&self, times: &[f64]) -> Result<()> {
        let t_end = *times.last().ok_or(Error::EmptyTrajectory)?;
        if let PhiWeight::Indicator { t, width } = *self {
            if !(width > 0.0) || t < 0.0 {
                return Err(Error::InadmissiblePhi(format!("indicator at t = {t} with width {width}")));
            }
        }
        let tol = 1e-12;
        if (self.eval(0.0, t_end).0 - 1.0).abs() > tol {
            return Err(Error::InadmissiblePhi("phi(0) != 1".into()));
        }
        if self.eval(t_end, t_end).0.abs() > tol {
            return Err(Error::InadmissiblePhi("phi(T) != 0".into()));
        }
        for &s in times {
            let (v, d) = self.eval(s, t_end);
            if v < -tol || d > tol {
                return Err(Error::InadmissiblePhi(format!("phi < 0 or phi' > 0 at t = {s}")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiResult {
    pub phi: PhiWeight,
    /// `phi(0) R(0) + int phi' R e^{-I} - int phi (W + <A, u - v> - corr) e^{-I}`,
    /// which equals `int (-phi') margin dt`; negative values violate the inequality.
    pub value: f64,
    /// Tolerance propagated from the pointwise model, `int (-phi') tau dt`.
    pub tau_bound: f64,
    pub violation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiReport {
    pub results: Vec<PhiResult>,
    pub max_violation: f64,
}

/// Evaluates the time-integrated form of the relative energy inequality for each `phi`.
pub fn phi_form_check(
    u: &Trajectory,
    vt: &TestTrajectory,
    cfg: &CertificateConfig,
    phis: &[PhiWeight],
) -> Result<PhiReport> {
    for p in phis {
        p.check(&u.times)?;
    }
    let s = series(u, vt, cfg)?;
    let h = u.sample_dt();
    let t_end = u.t_end();
    let n = s.times.len();
    let mut results = Vec::with_capacity(phis.len());
    for &phi in phis {
        let (pv, pd): (Vec<f64>, Vec<f64>) = s.times.iter().map(|&t| phi.eval(t, t_end)).unzip();
        let a: Vec<f64> = (0..n).map(|k| pd[k] * s.terms[k].r * s.discount(k)).collect();
        let b: Vec<f64> = (0..n)
            .map(|k| pv[k] * (s.terms[k].w + s.terms[k].pairing - s.terms[k].corr) * s.discount(k))
            .collect();
        let tau: Vec<f64> = (0..n)
            .map(|k| -pd[k] * cfg.tolerance.breakdown(u.spec.dt, s.times[k], s.quad[k], s.credit[k]).total())
            .collect();
        let value = pv[0] * s.terms[0].r + cumulative_integral(&a, h)[n - 1] - cumulative_integral(&b, h)[n - 1];
        let tau_bound = cumulative_integral(&tau, h)[n - 1];
        results.push(PhiResult { phi, value, tau_bound, violation: (-value).max(0.0) });
    }
    let max_violation = results.iter().map(|r| r.violation).fold(0.0, f64::max);
    Ok(PhiReport { results, max_violation })
}
