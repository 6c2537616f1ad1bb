use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{io, SpectralField};

use super::spec::SystemSpec;

/// Energy bookkeeping at the sample times.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EnergyLedger {
    /// `E = ||v||^2 / 2`
    pub energy: Vec<f64>,
    /// `nu ||grad v||^2`
    pub dissipation: Vec<f64>,
    /// `<f, v>`
    pub power: Vec<f64>,
    /// Largest single-step increase of `E` over the whole run.
    pub max_step_increase: f64,
}

/// Velocity samples of one run.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub spec: SystemSpec,
    pub times: Vec<f64>,
    pub states: Vec<SpectralField>,
    /// Solver steps between consecutive samples.
    pub stride: usize,
    pub provenance: String,
    pub ledger: EnergyLedger,
}

#[derive(Serialize, Deserialize)]
struct Manifest {
    spec: SystemSpec,
    times: Vec<f64>,
    stride: usize,
    provenance: String,
    ledger: EnergyLedger,
    files: Vec<String>,
}

pub(crate) fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    if times[0] != 0.0 {
        return Err(Error::InvalidSpec(format!("first sample at t = {}, expected 0", times[0])));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidSpec("sample times must increase strictly".into()));
    }
    if times.len() > 2 {
        let h = times[1] - times[0];
        if times.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h) {
            return Err(Error::InvalidSpec("sample times must be uniform".into()));
        }
    }
    Ok(())
}

impl Trajectory {
    /// Assembles a trajectory from given samples; the ledger is recomputed.
    pub fn from_states(
        spec: SystemSpec,
        times: Vec<f64>,
        states: Vec<SpectralField>,
        stride: usize,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        check_times(&times)?;
        if states.len() != times.len() {
            return Err(Error::ShapeMismatch(format!("{} states for {} times", states.len(), times.len())));
        }
        for s in &states {
            if s.grid() != spec.grid || s.components() != 2 {
                return Err(Error::ShapeMismatch("state does not live on the system grid".into()));
            }
            if !s.is_solenoidal() {
                return Err(Error::NotSolenoidal(s.divergence_defect()));
            }
        }
        let mut t = Trajectory { spec, times, states, stride, provenance: provenance.into(), ledger: EnergyLedger::default() };
        t.ledger = t.compute_ledger()?;
        Ok(t)
    }

    pub(crate) fn compute_ledger(&self) -> Result<EnergyLedger> {
        let forcing = self.spec.forcing.resolve(self.spec.grid)?;
        let mut l = EnergyLedger::default();
        for (t, v) in self.times.iter().zip(&self.states) {
            l.energy.push(0.5 * v.l2_norm().powi(2));
            l.dissipation.push(self.spec.nu * v.h1_seminorm().powi(2));
            l.power.push(if forcing.is_zero() { 0.0 } else { forcing.eval(*t).inner(v)? });
        }
        l.max_step_increase = l.energy.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
        Ok(l)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn n(&self) -> usize {
        self.spec.grid.n()
    }

    pub fn t_end(&self) -> f64 {
        *self.times.last().expect("nonempty")
    }

    /// Spacing of the sample grid (0 for a single sample).
    pub fn sample_dt(&self) -> f64 {
        if self.times.len() < 2 {
            0.0
        } else {
            self.times[1] - self.times[0]
        }
    }

    pub fn energy(&self) -> &[f64] {
        &self.ledger.energy
    }

    /// Index of the sample at time `t`, if `t` is a sample time.
    pub fn index_of_time(&self, t: f64) -> Option<usize> {
        let h = self.sample_dt();
        if h == 0.0 {
            return (t.abs() < 1e-12).then_some(0);
        }
        let k = (t / h).round();
        if k < 0.0 || k as usize >= self.len() {
            return None;
        }
        let k = k as usize;
        ((self.times[k] - t).abs() <= 1e-9 * h).then_some(k)
    }

    /// Same samples on another grid (padding or spectral truncation).
    pub fn resample(&self, n: usize) -> Result<Trajectory> {
        let states = self.states.iter().map(|s| s.resample(n)).collect::<Result<Vec<_>>>()?;
        Trajectory::from_states(
            self.spec.on_grid(n)?,
            self.times.clone(),
            states,
            self.stride,
            format!("{} | resampled to n = {n}", self.provenance),
        )
    }

    /// Keeps every `every`-th sample.
    pub fn subsample(&self, every: usize) -> Result<Trajectory> {
        let every = every.max(1);
        let idx: Vec<usize> = (0..self.len()).step_by(every).collect();
        Trajectory::from_states(
            self.spec.clone(),
            idx.iter().map(|&i| self.times[i]).collect(),
            idx.iter().map(|&i| self.states[i].clone()).collect(),
            self.stride * every,
            self.provenance.clone(),
        )
    }

    /// Pointwise-in-time combination `sum_i w_i u_i` of trajectories sharing spec and times.
    pub fn combine(weights: &[f64], members: &[&Trajectory]) -> Result<Trajectory> {
        let first = members.first().ok_or(Error::EmptyFamily)?;
        if weights.len() != members.len() {
            return Err(Error::ShapeMismatch("one weight per member".into()));
        }
        for m in members {
            if m.times != first.times || m.spec.grid != first.spec.grid {
                return Err(Error::IncompatibleFamily("members must share grid and sample times".into()));
            }
        }
        let states = (0..first.len())
            .map(|k| {
                let fields: Vec<&SpectralField> = members.iter().map(|m| &m.states[k]).collect();
                SpectralField::combination(weights, &fields)
            })
            .collect::<Result<Vec<_>>>()?;
        Trajectory::from_states(first.spec.clone(), first.times.clone(), states, first.stride, "convex combination")
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        let mut files = Vec::with_capacity(self.len());
        for (k, s) in self.states.iter().enumerate() {
            let name = format!("state_{k:05}.fld");
            io::write_field(&dir.join(&name), s)?;
            files.push(name);
        }
        let m = Manifest {
            spec: self.spec.clone(),
            times: self.times.clone(),
            stride: self.stride,
            provenance: self.provenance.clone(),
            ledger: self.ledger.clone(),
            files,
        };
        fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&m)?)?;
        Ok(())
    }

    /// Sample times and the energy ledger as stored by [`Trajectory::save`], without the states.
    pub fn load_ledger(dir: &Path) -> Result<(Vec<f64>, EnergyLedger)> {
        let path = dir.join("manifest.json");
        if !path.exists() {
            return Err(Error::MissingArtifact(path));
        }
        let m: Manifest = serde_json::from_slice(&fs::read(&path)?)?;
        Ok((m.times, m.ledger))
    }

    pub fn load(dir: &Path) -> Result<Trajectory> {
        let path = dir.join("manifest.json");
        if !path.exists() {
            return Err(Error::MissingArtifact(path));
        }
        let m: Manifest = serde_json::from_slice(&fs::read(&path)?)?;
        let states = m
            .files
            .iter()
            .map(|f| io::read_field(&dir.join(f)).map(|s| s.leray_project()))
            .collect::<Result<Vec<_>>>()?;
        let mut t = Trajectory::from_states(m.spec, m.times, states, m.stride, m.provenance)?;
        // keep the solver's step-level ledger entry
        t.ledger.max_step_increase = m.ledger.max_step_increase;
        Ok(t)
    }
}
