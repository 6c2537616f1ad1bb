use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{io, Grid, SpectralField};

use super::taylor_green::tg_shape;

/// Physical and numerical parameters of one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub nu: f64,
    #[serde(default)]
    pub forcing: Forcing,
    pub t_end: f64,
    pub dt: f64,
    pub grid: Grid,
    #[serde(default = "default_true")]
    pub dealias: bool,
}

fn default_true() -> bool {
    true
}

impl SystemSpec {
    pub fn new(nu: f64, t_end: f64, dt: f64, n: usize) -> Result<Self> {
        let s = SystemSpec { nu, forcing: Forcing::none(), t_end, dt, grid: Grid::new(n)?, dealias: true };
        s.validate()?;
        Ok(s)
    }

    pub fn with_forcing(mut self, forcing: Forcing) -> Self {
        self.forcing = forcing;
        self
    }

    pub fn with_dealias(mut self, dealias: bool) -> Self {
        self.dealias = dealias;
        self
    }

    pub fn is_euler(&self) -> bool {
        self.nu == 0.0
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.nu >= 0.0 && self.nu.is_finite()) {
            return Err(Error::InvalidSpec(format!("nu = {} must be finite and >= 0", self.nu)));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidSpec(format!("t_end = {} must be positive", self.t_end)));
        }
        if !(self.dt > 0.0 && self.dt <= self.t_end) {
            return Err(Error::InvalidSpec(format!("dt = {} must lie in (0, t_end]", self.dt)));
        }
        let steps = self.t_end / self.dt;
        if (steps - steps.round()).abs() > 1e-9 * steps {
            return Err(Error::InvalidSpec(format!("t_end / dt = {steps} is not an integer")));
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }

    /// Largest retained wavenumber per axis; `None` means the full grid.
    pub fn mode_cutoff(&self) -> Option<i64> {
        self.dealias.then(|| crate::field::dealias_mask_cutoff(self.grid.n()))
    }

    /// Same data on another grid.
    pub fn on_grid(&self, n: usize) -> Result<Self> {
        Ok(SystemSpec { grid: Grid::new(n)?, ..self.clone() })
    }

    /// True when two specs describe the same equation and data (grid and stepping may differ).
    pub fn same_data(&self, other: &SystemSpec) -> bool {
        self.nu == other.nu && self.forcing == other.forcing && (self.t_end - other.t_end).abs() < 1e-12
    }
}

/// Body force, a sum of separable terms `amplitude * cos(omega t) * shape(x)`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Forcing {
    #[serde(default)]
    pub terms: Vec<ForcingTerm>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ForcingTerm {
    /// `A cos(omega t) (sin x cos y, -cos x sin y)`.
    TaylorGreen {
        amplitude: f64,
        #[serde(default)]
        omega: f64,
    },
    /// `(A sin(k y), 0)`, steady.
    Kolmogorov { amplitude: f64, wavenumber: i64 },
    /// `A grad(sin x sin y)`, steady and removed by the projection.
    Gradient { amplitude: f64 },
    /// A steady field read from a field file and multiplied by `scale`.
    File {
        path: PathBuf,
        #[serde(default = "one")]
        scale: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl Forcing {
    pub fn none() -> Self {
        Forcing::default()
    }

    pub fn single(term: ForcingTerm) -> Self {
        Forcing { terms: vec![term] }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Concatenates the terms of two forcings.
    pub fn plus(&self, other: &Forcing) -> Forcing {
        Forcing { terms: self.terms.iter().chain(&other.terms).cloned().collect() }
    }

    pub fn scaled(&self, s: f64) -> Forcing {
        let terms = self
            .terms
            .iter()
            .map(|t| match t.clone() {
                ForcingTerm::TaylorGreen { amplitude, omega } => ForcingTerm::TaylorGreen { amplitude: s * amplitude, omega },
                ForcingTerm::Kolmogorov { amplitude, wavenumber } => {
                    ForcingTerm::Kolmogorov { amplitude: s * amplitude, wavenumber }
                }
                ForcingTerm::Gradient { amplitude } => ForcingTerm::Gradient { amplitude: s * amplitude },
                ForcingTerm::File { path, scale } => ForcingTerm::File { path, scale: s * scale },
            })
            .collect();
        Forcing { terms }
    }

    /// Precomputes the spatial shapes on `grid` (reads field files once).
    pub fn resolve(&self, grid: Grid) -> Result<ResolvedForcing> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            terms.push(match t {
                ForcingTerm::TaylorGreen { amplitude, omega } => (tg_shape(grid), *amplitude, *omega),
                ForcingTerm::Kolmogorov { amplitude, wavenumber } => {
                    let k = *wavenumber as f64;
                    (SpectralField::from_vector_fn(grid, |_, y| ((k * y).sin(), 0.0)), *amplitude, 0.0)
                }
                ForcingTerm::Gradient { amplitude } => {
                    let phi = SpectralField::from_scalar_fn(grid, |x, y| x.sin() * y.sin());
                    (phi.gradient(), *amplitude, 0.0)
                }
                ForcingTerm::File { path, scale } => {
                    let f = io::read_field(path)?;
                    if f.components() != Grid::DIM {
                        return Err(Error::InvalidSpec(format!("forcing file {} is not a vector field", path.display())));
                    }
                    (f.resample(grid.n())?, *scale, 0.0)
                }
            });
        }
        Ok(ResolvedForcing { grid, terms })
    }
}

/// A forcing with its spatial shapes evaluated on a grid.
#[derive(Clone, Debug)]
pub struct ResolvedForcing {
    grid: Grid,
    terms: Vec<(SpectralField, f64, f64)>,
}

impl ResolvedForcing {
    pub fn zero(grid: Grid) -> Self {
        ResolvedForcing { grid, terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn eval(&self, t: f64) -> SpectralField {
        let mut f = SpectralField::zeros(self.grid, Grid::DIM);
        for (shape, a, w) in &self.terms {
            f = f.axpy(a * (w * t).cos(), shape).expect("forcing shapes share the grid");
        }
        f
    }

    /// Restricts every shape to modes with `max(|kx|, |ky|) <= kmax`.
    pub fn masked(&self, kmax: Option<i64>) -> Self {
        match kmax {
            None => self.clone(),
            Some(k) => ResolvedForcing {
                grid: self.grid,
                terms: self
                    .terms
                    .iter()
                    .map(|(s, a, w)| (crate::field::sharp_lowpass(s, k), *a, *w))
                    .collect(),
            },
        }
    }
}
