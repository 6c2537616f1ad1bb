use rayon::prelude::*;

use crate::energy::{
    cumulative_integral, cumulative_trapezoid, nonsolenoidal_correction, rel_dissipation, rel_energy,
    residual_from_state,
};
use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::flow::{ResolvedForcing, TestTrajectory, Trajectory};

use super::report::{CertificateReport, Entry, EntryError, TestSummary};
use super::CertificateConfig;

/// A named test trajectory.
#[derive(Clone, Debug)]
pub struct TestCase {
    pub id: String,
    pub traj: TestTrajectory,
}

impl TestCase {
    pub fn new(id: impl Into<String>, traj: TestTrajectory) -> Self {
        TestCase { id: id.into(), traj }
    }
}

/// Pointwise ingredients of the inequality at one sample.
#[derive(Clone, Copy, Debug)]
pub(crate) struct SampleTerms {
    pub r: f64,
    pub w: f64,
    /// `<A(v), u - v>`
    pub pairing: f64,
    pub corr: f64,
    pub k: f64,
}

/// Time series of the discounted inequality for one test trajectory.
#[derive(Clone, Debug)]
pub(crate) struct Series {
    pub times: Vec<f64>,
    pub terms: Vec<SampleTerms>,
    pub log_i: Vec<f64>,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    pub quad: Vec<f64>,
    pub credit: Vec<f64>,
}

impl Series {
    pub fn margin(&self, k: usize) -> f64 {
        self.rhs[k] - self.lhs[k]
    }

    pub fn discount(&self, k: usize) -> f64 {
        (-self.log_i[k]).exp()
    }
}

pub(crate) fn sample_terms(
    u: &SpectralField,
    t: f64,
    vt: &TestTrajectory,
    nu: f64,
    forcing: &ResolvedForcing,
    cfg: &CertificateConfig,
) -> Result<SampleTerms> {
    let grid = u.grid();
    let (v, dv) = vt.eval(t, grid)?;
    let f = forcing.eval(t);
    let a = residual_from_state(&v, &dv, nu, &f, cfg.residual)?;
    let v = v.tag_solenoidal();
    let (test, corr) = if v.is_solenoidal() {
        (v, 0.0)
    } else if cfg.residual.nonsolenoidal_correction {
        let c = nonsolenoidal_correction(&v, u)?;
        (v.leray_project(), c)
    } else {
        return Err(Error::NotSolenoidal(v.divergence_defect()));
    };
    let diff = u.axpy(-1.0, &test)?;
    Ok(SampleTerms {
        r: rel_energy(u, &test)?,
        w: rel_dissipation(u, &test, nu)?,
        pairing: a.inner(&diff)?,
        corr,
        k: cfg.weight.eval(&test, nu)?,
    })
}

/// Assembles the discounted inequality from per-sample terms:
/// `lhs = R(t) e^{-I(t)} + int (W + <A, u - v>) e^{-I}` and `rhs = R(0) + int corr e^{-I}`.
pub(crate) fn assemble(times: Vec<f64>, terms: Vec<SampleTerms>) -> Series {
    let h = if times.len() > 1 { times[1] - times[0] } else { 0.0 };
    let kv: Vec<f64> = terms.iter().map(|s| s.k).collect();
    let log_i = cumulative_integral(&kv, h);
    let disc: Vec<f64> = log_i.iter().map(|i| (-i).exp()).collect();
    let flux: Vec<f64> = terms.iter().zip(&disc).map(|(s, d)| (s.w + s.pairing) * d).collect();
    let corr: Vec<f64> = terms.iter().zip(&disc).map(|(s, d)| s.corr * d).collect();
    let credit_density: Vec<f64> = terms.iter().zip(&disc).map(|(s, d)| s.k * s.r * d).collect();
    let (j, jt) = (cumulative_integral(&flux, h), cumulative_trapezoid(&flux, h));
    let (c, ct) = (cumulative_integral(&corr, h), cumulative_trapezoid(&corr, h));
    let credit = cumulative_integral(&credit_density, h);
    let r0 = terms[0].r;
    let n = times.len();
    let lhs = (0..n).map(|k| terms[k].r * disc[k] + j[k]).collect();
    let rhs = (0..n).map(|k| r0 + c[k]).collect();
    let quad = (0..n).map(|k| (j[k] - jt[k]).abs() + (c[k] - ct[k]).abs()).collect();
    Series { times, terms, log_i, lhs, rhs, quad, credit }
}

/// Evaluates the per-sample terms in parallel; returns the leading run of
/// successful samples and the errors of the failing ones.
pub(crate) fn evaluate(
    u: &Trajectory,
    upto: usize,
    vt: &TestTrajectory,
    cfg: &CertificateConfig,
) -> Result<(Vec<SampleTerms>, Vec<(f64, Error)>)> {
    let nu = u.spec.nu;
    cfg.weight.validate(nu)?;
    let forcing = cfg.forcing.as_ref().unwrap_or(&u.spec.forcing).resolve(u.spec.grid)?;
    let results: Vec<Result<SampleTerms>> = (0..upto)
        .into_par_iter()
        .map(|k| sample_terms(&u.states[k], u.times[k], vt, nu, &forcing, cfg))
        .collect();
    let mut ok = Vec::new();
    let mut errs = Vec::new();
    for (k, r) in results.into_iter().enumerate() {
        match r {
            Ok(s) if errs.is_empty() => ok.push(s),
            Ok(_) => {}
            Err(e) => errs.push((u.times[k], e)),
        }
    }
    Ok((ok, errs))
}

fn check_trajectory(u: &Trajectory) -> Result<()> {
    if u.is_empty() || u.states.len() != u.times.len() {
        return Err(Error::EmptyTrajectory);
    }
    Ok(())
}

/// Discounted margin `e^{-I(t)} [R(0) e^{I(t)} - R(t) - int (W + <A, u - v>) e^{I(t) - I(s)} ds]` at a sample time.
pub fn margin(u: &Trajectory, vt: &TestTrajectory, t: f64, cfg: &CertificateConfig) -> Result<f64> {
    check_trajectory(u)?;
    let k = u
        .index_of_time(t)
        .ok_or(Error::TimeOutOfRange { t, start: u.times[0], end: u.t_end() })?;
    let (terms, errs) = evaluate(u, k + 1, vt, cfg)?;
    if let Some((_, e)) = errs.into_iter().next() {
        return Err(e);
    }
    Ok(assemble(u.times[..=k].to_vec(), terms).margin(k))
}

/// Full discounted series for one test trajectory; fails on the first bad sample.
pub(crate) fn series(u: &Trajectory, vt: &TestTrajectory, cfg: &CertificateConfig) -> Result<Series> {
    check_trajectory(u)?;
    let (terms, errs) = evaluate(u, u.len(), vt, cfg)?;
    if let Some((_, e)) = errs.into_iter().next() {
        return Err(e);
    }
    Ok(assemble(u.times.clone(), terms))
}

/// Margins at every sample time for every test trajectory.
pub fn certify(u: &Trajectory, family: &[TestCase], cfg: &CertificateConfig) -> Result<CertificateReport> {
    check_trajectory(u)?;
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    cfg.weight.validate(u.spec.nu)?;
    let mut report = CertificateReport {
        entries: Vec::new(),
        errors: Vec::new(),
        tests: Vec::new(),
        verdict: false,
        sample_dt: u.sample_dt(),
        solver_dt: u.spec.dt,
        config: cfg.clone(),
    };
    for case in family {
        let (terms, errs) = match evaluate(u, u.len(), &case.traj, cfg) {
            Ok(x) => x,
            Err(e) => (Vec::new(), vec![(u.times[0], e)]),
        };
        for (t, e) in errs {
            report.errors.push(EntryError { test_id: case.id.clone(), t: Some(t), message: e.to_string() });
        }
        if terms.is_empty() {
            continue;
        }
        let m = terms.len();
        let s = assemble(u.times[..m].to_vec(), terms);
        let h = s.times.get(1).map_or(0.0, |t1| t1 - s.times[0]);
        let mut min_margin = f64::INFINITY;
        for k in 0..m {
            let tol_parts = cfg.tolerance.breakdown(u.spec.dt, s.times[k], s.quad[k], s.credit[k]);
            let e = Entry {
                test_id: case.id.clone(),
                t: s.times[k],
                lhs: s.lhs[k],
                rhs: s.rhs[k],
                margin: s.margin(k),
                tol: tol_parts.total(),
                tol_parts,
                log_gronwall: s.log_i[k],
            };
            min_margin = min_margin.min(e.margin);
            report.entries.push(e);
        }
        report.tests.push(TestSummary {
            test_id: case.id.clone(),
            min_margin,
            gronwall_resolution: s.terms.iter().fold(0.0f64, |a, x| a.max(x.k * h)),
            solenoidal: case.traj.is_solenoidal(),
        });
    }
    Ok(report.finish())
}
