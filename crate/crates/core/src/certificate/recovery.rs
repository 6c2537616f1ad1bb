use serde::{Deserialize, Serialize};

use crate::energy::{cumulative_integral, residual_from_state};
use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::flow::{TestTrajectory, TimeProfile, Trajectory};

use super::margin::series;
use super::CertificateConfig;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualRecovery {
    pub alphas: Vec<f64>,
    /// Final-time margin for each alpha.
    pub margins: Vec<f64>,
    /// Linear coefficient of the least-squares fit `c1 a + c2 a^2 + c3 a^3`.
    pub coefficient: f64,
    pub quadratic: f64,
    pub cubic: f64,
    /// `int <A(u), r> e^{-I} ds` by direct quadrature.
    pub direct: f64,
    pub relative_error: f64,
    /// `margin(alpha) - coefficient * alpha` per alpha.
    pub remainders: Vec<f64>,
}

/// Extracts `int <A(u), r>` from certificate margins against `u + alpha r`, where
/// `u` is splined in time and serves as its own test trajectory.
pub fn recover_weak_residual(
    u: &Trajectory,
    r: &SpectralField,
    alphas: &[f64],
    cfg: &CertificateConfig,
) -> Result<ResidualRecovery> {
    let distinct = {
        let mut a: Vec<f64> = alphas.iter().copied().filter(|a| *a != 0.0).collect();
        a.sort_by(f64::total_cmp);
        a.dedup();
        a.len()
    };
    if distinct < 3 {
        return Err(Error::DegenerateFit(format!("need 3 distinct nonzero alphas, got {distinct}")));
    }
    if !r.clone().tag_solenoidal().is_solenoidal() {
        return Err(Error::NotSolenoidal(r.divergence_defect()));
    }
    let base = TestTrajectory::spline(u)?;
    let shifted = |a: f64| {
        base.clone().plus(TestTrajectory::Separable { shape: r.clone(), profile: TimeProfile::Constant(a) })
    };
    let last = u.len() - 1;
    let margins = alphas
        .iter()
        .map(|&a| series(u, &shifted(a), cfg).map(|s| s.margin(last)))
        .collect::<Result<Vec<_>>>()?;
    let (c1, c2, c3) = fit_cubic_through_origin(alphas, &margins)?;

    // direct pairing, weighted like the margins
    let s0 = series(u, &base, cfg)?;
    let forcing = cfg.forcing.as_ref().unwrap_or(&u.spec.forcing).resolve(u.spec.grid)?;
    let rr = r.resample(u.n())?;
    let density = u
        .times
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            let (v, dv) = base.eval(t, u.spec.grid)?;
            let a = residual_from_state(&v, &dv, u.spec.nu, &forcing.eval(t), cfg.residual)?;
            Ok(a.inner(&rr)? * s0.discount(k))
        })
        .collect::<Result<Vec<f64>>>()?;
    let direct = cumulative_integral(&density, u.sample_dt())[last];
    let remainders = alphas.iter().zip(&margins).map(|(a, m)| m - c1 * a).collect();
    Ok(ResidualRecovery {
        alphas: alphas.to_vec(),
        margins,
        coefficient: c1,
        quadratic: c2,
        cubic: c3,
        direct,
        relative_error: (c1 - direct).abs() / direct.abs().max(f64::MIN_POSITIVE),
        remainders,
    })
}

/// Least squares for `y = c1 x + c2 x^2 + c3 x^3` via the 3x3 normal equations.
fn fit_cubic_through_origin(x: &[f64], y: &[f64]) -> Result<(f64, f64, f64)> {
    // scale x to O(1) for conditioning
    let s = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut a = [[0.0; 3]; 3];
    let mut b = [0.0; 3];
    for (&xi, &yi) in x.iter().zip(y) {
        let z = xi / s;
        let p = [z, z * z, z * z * z];
        for i in 0..3 {
            b[i] += p[i] * yi;
            for j in 0..3 {
                a[i][j] += p[i] * p[j];
            }
        }
    }
    let c = crate::linalg::solve_dense(&a.iter().map(|r| r.to_vec()).collect::<Vec<_>>(), &b)
        .ok_or_else(|| Error::DegenerateFit("singular normal equations".into()))?;
    Ok((c[0] / s, c[1] / (s * s), c[2] / (s * s * s)))
}
