use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Grid, SpectralField};

use super::taylor_green::{forced_tg_amplitude, forced_tg_amplitude_rate, tg_shape};
use super::trajectory::Trajectory;

/// Scalar time profile `g(t)` of a separable test trajectory `g(t) shape(x)`.
#[derive(Clone, Debug, PartialEq)]
pub enum TimeProfile {
    Constant(f64),
    /// `a e^{rate t}`
    Exponential { a: f64, rate: f64 },
    /// `a cos(omega t)`
    Cosine { a: f64, omega: f64 },
    /// Amplitude of the exact Taylor-Green solution under Taylor-Green forcing.
    ForcedTaylorGreen { a0: f64, nu: f64, amplitude: f64, omega: f64 },
}

impl TimeProfile {
    pub fn value(&self, t: f64) -> f64 {
        match *self {
            TimeProfile::Constant(c) => c,
            TimeProfile::Exponential { a, rate } => a * (rate * t).exp(),
            TimeProfile::Cosine { a, omega } => a * (omega * t).cos(),
            TimeProfile::ForcedTaylorGreen { a0, nu, amplitude, omega } => forced_tg_amplitude(a0, nu, amplitude, omega, t),
        }
    }

    pub fn rate(&self, t: f64) -> f64 {
        match *self {
            TimeProfile::Constant(_) => 0.0,
            TimeProfile::Exponential { a, rate } => a * rate * (rate * t).exp(),
            TimeProfile::Cosine { a, omega } => -a * omega * (omega * t).sin(),
            TimeProfile::ForcedTaylorGreen { a0, nu, amplitude, omega } => {
                forced_tg_amplitude_rate(a0, nu, amplitude, omega, t)
            }
        }
    }
}

/// Smooth-in-time comparison trajectory with an available time derivative.
#[derive(Clone, Debug)]
pub enum TestTrajectory {
    Zero,
    /// `profile(t) * shape(x)`
    Separable { shape: SpectralField, profile: TimeProfile },
    /// Cubic spline through the samples of a trajectory.
    Spline(Arc<SplineTrajectory>),
    Sum(Vec<TestTrajectory>),
}

impl TestTrajectory {
    /// Exact unforced Taylor-Green solution with amplitude `a`.
    pub fn taylor_green(nu: f64, amplitude: f64, grid: Grid) -> Self {
        TestTrajectory::Separable {
            shape: tg_shape(grid),
            profile: TimeProfile::Exponential { a: amplitude, rate: -2.0 * nu },
        }
    }

    pub fn spline(traj: &Trajectory) -> Result<Self> {
        Ok(TestTrajectory::Spline(Arc::new(SplineTrajectory::new(traj)?)))
    }

    pub fn steady(shape: SpectralField) -> Self {
        TestTrajectory::Separable { shape, profile: TimeProfile::Constant(1.0) }
    }

    /// `self + other`
    pub fn plus(self, other: TestTrajectory) -> Self {
        match self {
            TestTrajectory::Sum(mut v) => {
                v.push(other);
                TestTrajectory::Sum(v)
            }
            s => TestTrajectory::Sum(vec![s, other]),
        }
    }

    /// True when every evaluation is solenoidal.
    pub fn is_solenoidal(&self) -> bool {
        match self {
            TestTrajectory::Zero => true,
            TestTrajectory::Separable { shape, .. } => shape.is_solenoidal() || shape.clone().tag_solenoidal().is_solenoidal(),
            TestTrajectory::Spline(_) => true,
            TestTrajectory::Sum(v) => v.iter().all(|t| t.is_solenoidal()),
        }
    }

    /// `(v(t), d_t v(t))` on `grid`.
    pub fn eval(&self, t: f64, grid: Grid) -> Result<(SpectralField, SpectralField)> {
        match self {
            TestTrajectory::Zero => Ok((SpectralField::zeros(grid, 2), SpectralField::zeros(grid, 2))),
            TestTrajectory::Separable { shape, profile } => {
                let s = shape.resample(grid.n())?;
                Ok((s.scale(profile.value(t)), s.scale(profile.rate(t))))
            }
            TestTrajectory::Spline(sp) => {
                let (v, d) = sp.eval(t)?;
                Ok((v.resample(grid.n())?, d.resample(grid.n())?))
            }
            TestTrajectory::Sum(parts) => {
                let mut v = SpectralField::zeros(grid, 2);
                let mut d = SpectralField::zeros(grid, 2);
                for p in parts {
                    let (a, b) = p.eval(t, grid)?;
                    v = v.axpy(1.0, &a)?;
                    d = d.axpy(1.0, &b)?;
                }
                Ok((v, d))
            }
        }
    }
}

/// Not-a-knot cubic spline in time through uniformly spaced samples.
#[derive(Clone, Debug)]
pub struct SplineTrajectory {
    t0: f64,
    h: f64,
    values: Vec<SpectralField>,
    /// second derivatives at the knots
    curv: Vec<SpectralField>,
}

impl SplineTrajectory {
    pub fn new(traj: &Trajectory) -> Result<Self> {
        Self::from_samples(&traj.times, traj.states.clone())
    }

    pub fn from_samples(times: &[f64], values: Vec<SpectralField>) -> Result<Self> {
        if values.len() < 2 || times.len() != values.len() {
            return Err(Error::EmptyTrajectory);
        }
        let h = times[1] - times[0];
        if times.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h) || h <= 0.0 {
            return Err(Error::InvalidSpec("spline knots must be uniform".into()));
        }
        let curv = not_a_knot_curvatures(&values, h)?;
        Ok(SplineTrajectory { t0: times[0], h, values, curv })
    }

    pub fn range(&self) -> (f64, f64) {
        (self.t0, self.t0 + self.h * (self.values.len() - 1) as f64)
    }

    pub fn eval(&self, t: f64) -> Result<(SpectralField, SpectralField)> {
        let (a, b) = self.range();
        let slop = 1e-9 * self.h;
        if t < a - slop || t > b + slop {
            return Err(Error::TimeOutOfRange { t, start: a, end: b });
        }
        let h = self.h;
        let last = self.values.len() - 2;
        let k = (((t - a) / h).floor().max(0.0) as usize).min(last);
        let l = t - (a + k as f64 * h);
        let r = h - l;
        let (y0, y1) = (&self.values[k], &self.values[k + 1]);
        let (m0, m1) = (&self.curv[k], &self.curv[k + 1]);
        let v = m0
            .scale(r.powi(3) / (6.0 * h))
            .axpy(l.powi(3) / (6.0 * h), m1)?
            .axpy(r / h, &y0.axpy(-h * h / 6.0, m0)?)?
            .axpy(l / h, &y1.axpy(-h * h / 6.0, m1)?)?;
        let d = m0
            .scale(-r * r / (2.0 * h))
            .axpy(l * l / (2.0 * h), m1)?
            .axpy(1.0 / h, &y1.axpy(-1.0, y0)?)?
            .axpy(-h / 6.0, &m1.axpy(-1.0, m0)?)?;
        Ok((v, d))
    }
}

/// Second derivatives `M_k` of the not-a-knot spline. With the end conditions
/// eliminated the first and last interior equations read `6 M = r`.
fn not_a_knot_curvatures(y: &[SpectralField], h: f64) -> Result<Vec<SpectralField>> {
    let n = y.len() - 1;
    let zero = || SpectralField::zeros(y[0].grid(), y[0].components()).with_solenoidal(y[0].is_solenoidal());
    if n == 1 {
        return Ok(vec![zero(), zero()]);
    }
    // r_k = 6 (y_{k-1} - 2 y_k + y_{k+1}) / h^2 for k = 1..n-1
    let c = 6.0 / (h * h);
    let r: Vec<SpectralField> = (1..n)
        .map(|k| y[k - 1].axpy(-2.0, &y[k])?.axpy(1.0, &y[k + 1]).map(|s| s.scale(c)))
        .collect::<Result<_>>()?;
    let mut m = vec![zero(); n + 1];
    m[1] = r[0].scale(1.0 / 6.0);
    if n == 2 {
        return Ok(vec![m[1].clone(), m[1].clone(), m[1].clone()]);
    }
    m[n - 1] = r[n - 2].scale(1.0 / 6.0);
    if n >= 4 {
        // unknowns M_2..M_{n-2}: M_{k-1} + 4 M_k + M_{k+1} = r_k
        let cnt = n - 3;
        let mut cp = vec![0.0; cnt];
        let mut dp: Vec<SpectralField> = Vec::with_capacity(cnt);
        for i in 0..cnt {
            let k = i + 2;
            let mut rhs = r[k - 1].clone();
            if k == 2 {
                rhs = rhs.axpy(-1.0, &m[1])?;
            }
            if k == n - 2 {
                rhs = rhs.axpy(-1.0, &m[n - 1])?;
            }
            let (beta, prev) = if i == 0 { (4.0, None) } else { (4.0 - cp[i - 1], Some(&dp[i - 1])) };
            cp[i] = 1.0 / beta;
            let d = match prev {
                Some(p) => rhs.axpy(-1.0, p)?,
                None => rhs,
            };
            dp.push(d.scale(1.0 / beta));
        }
        for i in (0..cnt).rev() {
            let k = i + 2;
            m[k] = if i + 1 < cnt { dp[i].axpy(-cp[i], &m[k + 1])? } else { dp[i].clone() };
        }
    }
    m[0] = m[1].scale(2.0).axpy(-1.0, &m[2])?;
    m[n] = m[n - 1].scale(2.0).axpy(-1.0, &m[n - 2])?;
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar_samples(f: impl Fn(f64) -> f64, times: &[f64]) -> Vec<SpectralField> {
        let g = Grid::new(4).unwrap();
        let unit = SpectralField::from_vector_fn(g, |x, y| (x.sin() * y.cos(), -x.cos() * y.sin())).leray_project();
        times.iter().map(|&t| unit.scale(f(t))).collect()
    }

    fn amp(s: &SpectralField) -> f64 {
        // unit TG has coefficient -i/4 at k = (1, 1) in component 0
        s.coefficient(0, 1, 1).im / -0.25
    }

    #[test]
    fn reproduces_cubics_exactly() {
        let cubic = |t: f64| 1.0 - 2.0 * t + 0.5 * t * t + 3.0 * t.powi(3);
        let dcubic = |t: f64| -2.0 + t + 9.0 * t * t;
        for npts in [4usize, 5, 6, 9] {
            let times: Vec<f64> = (0..npts).map(|k| 0.1 * k as f64).collect();
            let sp = SplineTrajectory::from_samples(&times, scalar_samples(cubic, &times)).unwrap();
            for &t in &[0.0, 0.033, 0.15, 0.1 * (npts - 1) as f64] {
                let (v, d) = sp.eval(t).unwrap();
                assert!((amp(&v) - cubic(t)).abs() < 1e-12, "npts {npts} t {t}");
                assert!((amp(&d) - dcubic(t)).abs() < 1e-10, "npts {npts} t {t}");
            }
        }
    }

    #[test]
    fn three_points_give_parabola_two_give_line() {
        let par = |t: f64| 2.0 + t - 4.0 * t * t;
        let times = [0.0, 0.5, 1.0];
        let sp = SplineTrajectory::from_samples(&times, scalar_samples(par, &times)).unwrap();
        let (v, d) = sp.eval(0.8).unwrap();
        assert!((amp(&v) - par(0.8)).abs() < 1e-12);
        assert!((amp(&d) - (1.0 - 8.0 * 0.8)).abs() < 1e-12);
        let times = [0.0, 1.0];
        let sp = SplineTrajectory::from_samples(&times, scalar_samples(|t| 1.0 + 2.0 * t, &times)).unwrap();
        assert!((amp(&sp.eval(0.25).unwrap().1) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn outside_range_is_an_error() {
        let times = [0.0, 0.5, 1.0];
        let sp = SplineTrajectory::from_samples(&times, scalar_samples(|t| t, &times)).unwrap();
        assert!(matches!(sp.eval(1.5), Err(Error::TimeOutOfRange { .. })));
    }

    #[test]
    fn smooth_profile_converges_fourth_order() {
        let f = |t: f64| (2.0 * t).sin();
        let err = |npts: usize| {
            let times: Vec<f64> = (0..npts).map(|k| k as f64 / (npts - 1) as f64).collect();
            let sp = SplineTrajectory::from_samples(&times, scalar_samples(f, &times)).unwrap();
            (0..50)
                .map(|i| {
                    let t = i as f64 / 49.0;
                    (amp(&sp.eval(t).unwrap().0) - f(t)).abs()
                })
                .fold(0.0, f64::max)
        };
        let ratio = err(11) / err(21);
        assert!(ratio > 12.0 && ratio < 20.0, "ratio {ratio}");
    }

    #[test]
    fn separable_tg_derivative() {
        let g = Grid::new(8).unwrap();
        let tt = TestTrajectory::taylor_green(0.1, 1.0, g);
        let (v, d) = tt.eval(0.5, g).unwrap();
        assert!(d.max_coeff_diff(&v.scale(-0.2)).unwrap() < 1e-15);
        assert!(tt.is_solenoidal());
    }
}
