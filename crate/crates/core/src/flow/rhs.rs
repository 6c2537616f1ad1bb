use crate::error::{Error, Result};
use crate::field::{sharp_lowpass, SpectralField};

use super::spec::{ResolvedForcing, SystemSpec};

/// Galerkin right-hand side `P[-(v.grad)v + f(t)] + nu lap v`.
///
/// With `spec.dealias` the velocity and the nonlinear term are restricted to the
/// 2/3-rule band; products are always formed on the 2n grid, so the quadratic
/// term is exact on the retained modes.
pub fn nse_rhs(v: &SpectralField, spec: &SystemSpec, t: f64) -> Result<SpectralField> {
    let st = Stepper::new(spec, spec.dt)?;
    Ok(st.nonlinear(v, t)?.axpy(spec.nu, &st.mask(v).laplacian())?)
}

/// One integrating-factor RK4 step of size `dt` from time `t`.
pub fn advance(v: &SpectralField, spec: &SystemSpec, t: f64, dt: f64) -> Result<SpectralField> {
    Stepper::new(spec, dt)?.step(v, t)
}

/// Reusable stepper holding the resolved forcing and the linear propagators.
pub(crate) struct Stepper {
    nu: f64,
    dt: f64,
    cutoff: Option<i64>,
    forcing: ResolvedForcing,
}

impl Stepper {
    pub(crate) fn new(spec: &SystemSpec, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidSpec(format!("dt = {dt}")));
        }
        let cutoff = spec.mode_cutoff();
        Ok(Stepper { nu: spec.nu, dt, cutoff, forcing: spec.forcing.resolve(spec.grid)?.masked(cutoff) })
    }

    pub(crate) fn mask(&self, v: &SpectralField) -> SpectralField {
        match self.cutoff {
            Some(k) => sharp_lowpass(v, k),
            None => v.clone(),
        }
    }

    /// `P[-(v.grad)v + f(t)]` on the retained band.
    pub(crate) fn nonlinear(&self, v: &SpectralField, t: f64) -> Result<SpectralField> {
        let vm = self.mask(v);
        let mut n = vm.convect(&vm)?.scale(-1.0);
        if !self.forcing.is_zero() {
            n = n.axpy(1.0, &self.forcing.eval(t))?;
        }
        Ok(self.mask(&n).leray_project())
    }

    fn decay(&self, v: &SpectralField, frac: f64) -> SpectralField {
        if self.nu == 0.0 {
            return v.clone();
        }
        let c = self.nu * self.dt * frac;
        v.map_spectrum(|kx, ky| (-c * (kx * kx + ky * ky) as f64).exp())
    }

    pub(crate) fn step(&self, v: &SpectralField, t: f64) -> Result<SpectralField> {
        let h = self.dt;
        let k1 = self.nonlinear(v, t)?.scale(h);
        let v2 = self.decay(&v.axpy(0.5, &k1)?, 0.5);
        let k2 = self.nonlinear(&v2, t + 0.5 * h)?.scale(h);
        let ev_half = self.decay(v, 0.5);
        let v3 = ev_half.axpy(0.5, &k2)?;
        let k3 = self.nonlinear(&v3, t + 0.5 * h)?.scale(h);
        let v4 = self.decay(v, 1.0).axpy(1.0, &self.decay(&k3, 0.5))?;
        let k4 = self.nonlinear(&v4, t + h)?.scale(h);
        let mid = self.decay(&k2.axpy(1.0, &k3)?, 0.5).scale(2.0);
        let incr = self.decay(&k1, 1.0).axpy(1.0, &mid)?.axpy(1.0, &k4)?;
        let out = self.decay(v, 1.0).axpy(1.0 / 6.0, &incr)?;
        if !out.all_finite() {
            return Err(Error::BlowUp { t: t + h });
        }
        Ok(self.mask(&out).leray_project())
    }
}
