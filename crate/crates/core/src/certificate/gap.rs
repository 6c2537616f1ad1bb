use serde::{Deserialize, Serialize};

use crate::energy::{cumulative_integral, rel_dissipation, rel_energy, WeightSpec};
use crate::error::{Error, Result};
use crate::flow::{Forcing, TestTrajectory, Trajectory};

/// Which stability estimate to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapVariant {
    /// `R(t) + 1/2 int W e^{I(t)-I(s)} <= R(0) e^{I(t)} + (1/nu) int ||f - f1||_{H^-1}^2 e^{I(t)-I(s)}`
    NavierStokes,
    /// Weight `K + 1`: `R(t) <= R(0) e^{I(t)} + 1/2 int ||f - f1||_{L2}^2 e^{I(t)-I(s)}`
    Euler,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapEntry {
    pub t: f64,
    /// discounted by `e^{-I(t)}` like certificate entries
    pub lhs: f64,
    pub rhs: f64,
    /// forcing part of `rhs`
    pub inflation: f64,
    pub log_gronwall: f64,
    /// undiscounted `R(u1(t) | v(t))`
    pub rel_energy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub variant: GapVariant,
    pub entries: Vec<GapEntry>,
    pub holds: bool,
}

/// Stability of a trajectory `u1` (driven by `f1`) against a strong solution `v` driven by `f`.
pub fn weak_strong_gap(
    u1: &Trajectory,
    v_strong: &TestTrajectory,
    f1: &Forcing,
    f: &Forcing,
    w: &WeightSpec,
    variant: GapVariant,
) -> Result<GapReport> {
    if u1.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    let nu = u1.spec.nu;
    if variant == GapVariant::NavierStokes && nu <= 0.0 {
        return Err(Error::InvalidWeight("the H^-1 estimate needs nu > 0".into()));
    }
    w.validate(nu)?;
    let grid = u1.spec.grid;
    let (rf1, rf) = (f1.resolve(grid)?, f.resolve(grid)?);
    let mut r = Vec::with_capacity(u1.len());
    let mut wd = Vec::with_capacity(u1.len());
    let mut k = Vec::with_capacity(u1.len());
    let mut g2 = Vec::with_capacity(u1.len());
    for (t, u) in u1.times.iter().zip(&u1.states) {
        let (v, _) = v_strong.eval(*t, grid)?;
        r.push(rel_energy(u, &v)?);
        wd.push(rel_dissipation(u, &v, nu)?);
        let kk = w.eval(&v, nu)?;
        let diff = rf.eval(*t).axpy(-1.0, &rf1.eval(*t))?;
        match variant {
            GapVariant::NavierStokes => {
                k.push(kk);
                g2.push(diff.h_minus1_norm()?.powi(2) / nu);
            }
            GapVariant::Euler => {
                k.push(kk + 1.0);
                g2.push(0.5 * diff.l2_norm().powi(2));
            }
        }
    }
    let h = u1.sample_dt();
    let log_i = cumulative_integral(&k, h);
    let disc: Vec<f64> = log_i.iter().map(|i| (-i).exp()).collect();
    let wdisc: Vec<f64> = wd.iter().zip(&disc).map(|(a, d)| 0.5 * a * d).collect();
    let gdisc: Vec<f64> = g2.iter().zip(&disc).map(|(a, d)| a * d).collect();
    let wint = cumulative_integral(&wdisc, h);
    let gint = cumulative_integral(&gdisc, h);
    let entries: Vec<GapEntry> = (0..u1.len())
        .map(|i| {
            let retained = if variant == GapVariant::NavierStokes { wint[i] } else { 0.0 };
            GapEntry {
                t: u1.times[i],
                lhs: r[i] * disc[i] + retained,
                rhs: r[0] + gint[i],
                inflation: gint[i],
                log_gronwall: log_i[i],
                rel_energy: r[i],
            }
        })
        .collect();
    let holds = entries.iter().all(|e| e.lhs <= e.rhs * (1.0 + 1e-9) + 1e-14);
    Ok(GapReport { variant, entries, holds })
}
