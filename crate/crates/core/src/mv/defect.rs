use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{gaussian_lowpass, io, Grid, SpectralField};
use crate::flow::Trajectory;

/// Options of the defect construction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DefectOptions {
    /// Gaussian low-pass scale: mode `k` is damped by `exp(-sigma^2 |k|^2 / 2)`.
    #[serde(default = "d_sigma")]
    pub sigma: f64,
    /// Largest admissible clipped trace relative to the total trace mass.
    #[serde(default = "d_clip")]
    pub clip_limit: f64,
}

fn d_sigma() -> f64 {
    0.5
}
fn d_clip() -> f64 {
    0.05
}

impl Default for DefectOptions {
    fn default() -> Self {
        DefectOptions { sigma: d_sigma(), clip_limit: d_clip() }
    }
}

/// Magnitude of the eigenvalue clipping applied to make a defect PSD.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ClipReport {
    /// Most negative eigenvalue encountered before clipping (0 if none).
    pub min_eigenvalue: f64,
    /// Largest trace mass `int tr` added by clipping at one sample time.
    pub clipped_trace: f64,
    /// `clipped_trace` relative to the trace mass of that sample.
    pub relative: f64,
}

/// Symmetric matrix density sampled on the quadrature grid (side `2n` for
/// velocity grid `n`) at the trajectory sample times. It acts on matrix fields
/// as the discrete measure `sum_x h^2 m(x) delta_x`.
#[derive(Clone, Debug, PartialEq)]
pub struct DefectField {
    velocity_n: usize,
    times: Vec<f64>,
    /// `[m11, m12, m22]` per time, each of length `(2n)^2`
    samples: Vec<[Vec<f64>; 3]>,
    pub sigma: f64,
    pub clip: ClipReport,
}

#[derive(Serialize, Deserialize)]
struct Manifest {
    velocity_n: usize,
    times: Vec<f64>,
    sigma: f64,
    clip: ClipReport,
    files: Vec<String>,
}

/// Smallest eigenvalue of `[[a, b], [b, c]]`.
pub(crate) fn min_eig(a: f64, b: f64, c: f64) -> f64 {
    0.5 * (a + c) - (0.25 * (a - c) * (a - c) + b * b).sqrt()
}

/// Projects `[[a, b], [b, c]]` onto the PSD cone; returns the projection and the trace added.
fn clip_psd(a: f64, b: f64, c: f64) -> ([f64; 3], f64) {
    let r = (0.25 * (a - c) * (a - c) + b * b).sqrt();
    let mid = 0.5 * (a + c);
    let (lo, hi) = (mid - r, mid + r);
    if lo >= 0.0 {
        return ([a, b, c], 0.0);
    }
    if hi <= 0.0 {
        return ([0.0; 3], -(a + c));
    }
    // keep hi e e^T with e the top eigenvector
    let (ex, ey) = if a >= c { (hi - c, b) } else { (b, hi - a) };
    let norm2 = ex * ex + ey * ey;
    if norm2 == 0.0 {
        return ([a.max(0.0), 0.0, c.max(0.0)], -lo);
    }
    let s = hi / norm2;
    ([s * ex * ex, s * ex * ey, s * ey * ey], -lo)
}

impl DefectField {
    /// Identically zero defect aligned with a trajectory.
    pub fn zeros(velocity_n: usize, times: Vec<f64>) -> Self {
        let len = 4 * velocity_n * velocity_n;
        let samples = times.iter().map(|_| [vec![0.0; len], vec![0.0; len], vec![0.0; len]]).collect();
        DefectField { velocity_n, times, samples, sigma: 0.0, clip: ClipReport::default() }
    }

    /// Builds a defect from given samples (symmetric by construction) and checks PSD.
    pub fn from_samples(velocity_n: usize, times: Vec<f64>, samples: Vec<[Vec<f64>; 3]>, sigma: f64) -> Result<Self> {
        let len = 4 * velocity_n * velocity_n;
        if samples.len() != times.len() || samples.iter().any(|s| s.iter().any(|c| c.len() != len)) {
            return Err(Error::ShapeMismatch(format!("defect samples must be {len} points per component and time")));
        }
        let d = DefectField { velocity_n, times, samples, sigma, clip: ClipReport::default() };
        let lo = d.min_eigenvalue();
        if lo < -1e-12 * d.trace_scale() {
            return Err(Error::ExcessiveClip(format!("defect is not PSD (min eigenvalue {lo:.3e})")));
        }
        Ok(d)
    }

    pub fn velocity_n(&self) -> usize {
        self.velocity_n
    }

    /// The quadrature grid the samples live on.
    pub fn grid(&self) -> Grid {
        Grid::new(2 * self.velocity_n).expect("2n is a valid grid")
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `[m11, m12, m22]` at sample `k`.
    pub fn sample(&self, k: usize) -> &[Vec<f64>; 3] {
        &self.samples[k]
    }

    fn weight(&self) -> f64 {
        let h = self.grid().spacing();
        h * h
    }

    /// `<m(t_k), I> = int tr m`.
    pub fn trace_mass(&self, k: usize) -> f64 {
        let [a, _, c] = &self.samples[k];
        self.weight() * a.iter().zip(c).map(|(x, y)| x + y).sum::<f64>()
    }

    /// `<m(t_k) : G>` for a matrix field given by its physical samples
    /// `[G11, G12, G21, G22]` on the quadrature grid.
    pub fn pair(&self, k: usize, g: &[Vec<f64>]) -> f64 {
        let [a, b, c] = &self.samples[k];
        let s: f64 = (0..a.len()).map(|i| a[i] * g[0][i] + b[i] * (g[1][i] + g[2][i]) + c[i] * g[3][i]).sum();
        self.weight() * s
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.samples
            .iter()
            .flat_map(|[a, b, c]| (0..a.len()).map(move |i| min_eig(a[i], b[i], c[i])))
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest pointwise trace, the scale for PSD tolerances.
    pub fn trace_scale(&self) -> f64 {
        self.samples
            .iter()
            .flat_map(|[a, _, c]| a.iter().zip(c).map(|(x, y)| (x + y).abs()))
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE)
    }

    /// `s m`
    pub fn scale(&self, s: f64) -> Self {
        let mut d = self.clone();
        for comp in d.samples.iter_mut().flatten() {
            comp.iter_mut().for_each(|v| *v *= s);
        }
        d
    }

    /// Pointwise linear combination of aligned defects plus extra sample terms.
    pub(crate) fn combine(weights: &[f64], parts: &[&DefectField], extra: Vec<[Vec<f64>; 3]>) -> Result<Self> {
        let first = parts.first().ok_or(Error::EmptyFamily)?;
        for p in parts {
            if p.velocity_n != first.velocity_n || p.times != first.times {
                return Err(Error::IncompatibleFamily("defects must share grid and sample times".into()));
            }
        }
        let mut out = extra;
        for (k, slot) in out.iter_mut().enumerate() {
            for (w, p) in weights.iter().zip(parts) {
                for c in 0..3 {
                    slot[c].iter_mut().zip(&p.samples[k][c]).for_each(|(o, v)| *o += w * v);
                }
            }
        }
        Ok(DefectField {
            velocity_n: first.velocity_n,
            times: first.times.clone(),
            samples: out,
            sigma: parts.iter().map(|p| p.sigma).fold(0.0, f64::max),
            clip: ClipReport {
                min_eigenvalue: parts.iter().map(|p| p.clip.min_eigenvalue).fold(0.0, f64::min),
                clipped_trace: parts.iter().zip(weights).map(|(p, w)| w * p.clip.clipped_trace).sum(),
                relative: parts.iter().map(|p| p.clip.relative).fold(0.0, f64::max),
            },
        })
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        let n2 = 2 * self.velocity_n;
        let mut files = Vec::with_capacity(self.len());
        for (k, s) in self.samples.iter().enumerate() {
            let name = format!("defect_{k:05}.fld");
            io::write_raw(&dir.join(&name), &io::RawField { n: n2, components: s.to_vec() })?;
            files.push(name);
        }
        let m = Manifest { velocity_n: self.velocity_n, times: self.times.clone(), sigma: self.sigma, clip: self.clip, files };
        fs::write(dir.join("defect.json"), serde_json::to_string_pretty(&m)?)?;
        Ok(())
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let path = dir.join("defect.json");
        if !path.exists() {
            return Err(Error::MissingArtifact(path));
        }
        let m: Manifest = serde_json::from_slice(&fs::read(&path)?)?;
        let mut samples = Vec::with_capacity(m.files.len());
        for f in &m.files {
            let p = dir.join(f);
            let raw = io::read_raw(&p)?;
            if raw.n != 2 * m.velocity_n || raw.components.len() != 3 {
                return Err(Error::FieldFormat { path: p, reason: "expected 3 components on the 2n grid".into() });
            }
            let [a, b, c]: [Vec<f64>; 3] = raw.components.try_into().expect("three components");
            samples.push([a, b, c]);
        }
        if samples.len() != m.times.len() {
            return Err(Error::ShapeMismatch("defect files do not match the time list".into()));
        }
        Ok(DefectField { velocity_n: m.velocity_n, times: m.times, samples, sigma: m.sigma, clip: m.clip })
    }
}

/// `u (x) u` sampled on the quadrature grid of `u`, as `[11, 12, 22]`.
pub(crate) fn outer_samples(u: &SpectralField) -> [Vec<f64>; 3] {
    let s = u.physical_on(2 * u.n()).expect("2n is a valid grid");
    [
        s[0].iter().map(|x| x * x).collect(),
        s[0].iter().zip(&s[1]).map(|(x, y)| x * y).collect(),
        s[1].iter().map(|y| y * y).collect(),
    ]
}

/// Low-passed `v_f (x) v_f - v_c (x) v_c`, clipped to the PSD cone.
///
/// The coarse trajectory is padded to the fine grid; both must share forcing,
/// horizon, sample times and initial data (viscosity may differ).
pub fn defect_from_pair(fine: &Trajectory, coarse: &Trajectory, opts: &DefectOptions) -> Result<DefectField> {
    if fine.is_empty() || coarse.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    if coarse.n() > fine.n() {
        return Err(Error::IncompatibleFamily(format!("coarse grid {} is finer than {}", coarse.n(), fine.n())));
    }
    if fine.spec.forcing != coarse.spec.forcing || (fine.spec.t_end - coarse.spec.t_end).abs() > 1e-12 {
        return Err(Error::IncompatibleFamily("pair must share forcing and horizon".into()));
    }
    if fine.times.len() != coarse.times.len() || fine.times.iter().zip(&coarse.times).any(|(a, b)| (a - b).abs() > 1e-12)
    {
        return Err(Error::IncompatibleFamily("pair must share sample times".into()));
    }
    let d0 = fine.states[0].resample(coarse.n())?.max_coeff_diff(&coarse.states[0])?;
    if d0 > 1e-10 * coarse.states[0].max_abs_coeff().max(1e-300) {
        return Err(Error::IncompatibleFamily(format!("initial states differ by {d0:.3e}")));
    }
    if !(opts.sigma >= 0.0) {
        return Err(Error::InvalidSpec(format!("low-pass scale {} must be >= 0", opts.sigma)));
    }
    let n = fine.n();
    let big = Grid::new(2 * n)?;
    let h2 = big.spacing().powi(2);
    let mut samples = Vec::with_capacity(fine.len());
    let mut clip = ClipReport::default();
    for (vf, vc) in fine.states.iter().zip(&coarse.states) {
        let vc = vc.resample(n)?;
        let (of, oc) = (outer_samples(vf), outer_samples(&vc));
        let raw: Vec<Vec<f64>> = (0..3).map(|c| of[c].iter().zip(&oc[c]).map(|(a, b)| a - b).collect()).collect();
        // the products are band-limited below the 2n Nyquist, so the filter is exact
        let smooth = gaussian_lowpass(&SpectralField::from_physical(big, &raw)?, opts.sigma).to_physical();
        let (mut a, mut b, mut c) = (smooth[0].clone(), smooth[1].clone(), smooth[2].clone());
        let mut added = 0.0;
        let mut mass = 0.0;
        for i in 0..a.len() {
            clip.min_eigenvalue = clip.min_eigenvalue.min(min_eig(a[i], b[i], c[i]));
            let ([x, y, z], t) = clip_psd(a[i], b[i], c[i]);
            (a[i], b[i], c[i]) = (x, y, z);
            added += t;
            mass += x + z;
        }
        added *= h2;
        mass *= h2;
        if added > clip.clipped_trace {
            clip.clipped_trace = added;
            clip.relative = added / mass.max(f64::MIN_POSITIVE);
        }
        samples.push([a, b, c]);
    }
    if clip.relative > opts.clip_limit {
        return Err(Error::ExcessiveClip(format!(
            "clipping added {:.3e} of trace ({:.1}% of the defect mass, limit {:.1}%)",
            clip.clipped_trace,
            100.0 * clip.relative,
            100.0 * opts.clip_limit
        )));
    }
    Ok(DefectField { velocity_n: n, times: fine.times.clone(), samples, sigma: opts.sigma, clip })
}
