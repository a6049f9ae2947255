//! Mehler-Fock transform of radial functions on the disk.
//!
//! ```text
//! c(kappa) = Int_0^inf f(tau) P_{-1/2+i kappa}(cosh tau) sinh tau dtau
//! f(tau)   = Int_0^inf kappa tanh(pi kappa) P_{-1/2+i kappa}(cosh tau) c(kappa) dkappa
//! ```
//!
//! Both integrals are discretized on uniform grids. The `kappa` integrand is even,
//! so the trapezoid rule is already high order there. The `tau` integrand is odd
//! (through `sinh tau`), and the plain trapezoid rule would only be second order
//! at `tau = 0`; the radial weights carry an endpoint correction for that.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::conical::{conical_p_sweep, QuadratureConfig};
use crate::error::{Error, Result};

/// Endpoint correction for a trapezoid sum of an odd integrand starting at 0.
///
/// Added to the weights of nodes `1..=5` (in units of the step). They solve
/// `sum_j c_j j^{2k-1} = B_{2k} / (2k)` for `k = 1..5`, which cancels the
/// Euler-Maclaurin terms through `h^10`.
const ODD_END_CORRECTION: [f64; 5] = [
    0.14579990129469295,
    -0.044957461519961515,
    0.011457036886724387,
    -0.0019237597536208646,
    0.00015445668657474213,
];

/// Uniform nodes `tau_j = j * tau_max / (n_tau - 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    tau_max: f64,
    n_tau: usize,
}

impl RadialGrid {
    pub fn new(tau_max: f64, n_tau: usize) -> Result<Self> {
        if !(tau_max > 0.0) || !tau_max.is_finite() {
            return Err(Error::invalid("tau_max", "must be positive and finite"));
        }
        if n_tau < 32 {
            return Err(Error::invalid("n_tau", format!("must be >= 32, got {n_tau}")));
        }
        Ok(RadialGrid { tau_max, n_tau })
    }

    pub fn tau_max(&self) -> f64 {
        self.tau_max
    }

    pub fn len(&self) -> usize {
        self.n_tau
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        self.tau_max / (self.n_tau - 1) as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        if j + 1 == self.n_tau {
            self.tau_max
        } else {
            j as f64 * self.step()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_tau).map(|j| self.node(j)).collect()
    }

    /// Quadrature weights for `Int_0^tau_max g(tau) sinh tau dtau`.
    pub fn measure_weights(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.n_tau)
            .map(|j| {
                let mut w = if j == 0 || j + 1 == self.n_tau { 0.5 } else { 1.0 };
                if (1..=ODD_END_CORRECTION.len()).contains(&j) {
                    w += ODD_END_CORRECTION[j - 1];
                }
                h * w * self.node(j).sinh()
            })
            .collect()
    }

    fn key(&self) -> (u64, usize) {
        (self.tau_max.to_bits(), self.n_tau)
    }
}

/// Uniform nodes `kappa_i = i * kappa_max / (n_kappa - 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralGrid {
    kappa_max: f64,
    n_kappa: usize,
}

impl SpectralGrid {
    pub fn new(kappa_max: f64, n_kappa: usize) -> Result<Self> {
        if !(kappa_max > 0.0) || !kappa_max.is_finite() {
            return Err(Error::invalid("kappa_max", "must be positive and finite"));
        }
        if n_kappa < 32 {
            return Err(Error::invalid("n_kappa", format!("must be >= 32, got {n_kappa}")));
        }
        Ok(SpectralGrid { kappa_max, n_kappa })
    }

    pub fn kappa_max(&self) -> f64 {
        self.kappa_max
    }

    pub fn len(&self) -> usize {
        self.n_kappa
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        self.kappa_max / (self.n_kappa - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        if i + 1 == self.n_kappa {
            self.kappa_max
        } else {
            i as f64 * self.step()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_kappa).map(|i| self.node(i)).collect()
    }

    /// Trapezoid weights times the Plancherel density `kappa tanh(pi kappa)`.
    pub fn plancherel_weights(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.n_kappa)
            .map(|i| {
                let end = if i == 0 || i + 1 == self.n_kappa { 0.5 } else { 1.0 };
                let k = self.node(i);
                h * end * k * (PI * k).tanh()
            })
            .collect()
    }

    fn key(&self) -> (u64, usize) {
        (self.kappa_max.to_bits(), self.n_kappa)
    }
}

/// Samples `f(tau_j)` of a radial function.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialFunction {
    pub grid: RadialGrid,
    values: Vec<f64>,
}

impl RadialFunction {
    pub fn new(grid: RadialGrid, values: Vec<f64>) -> Result<Self> {
        check_values(grid.len(), &values)?;
        Ok(RadialFunction { grid, values })
    }

    pub fn from_fn(grid: RadialGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.nodes().into_iter().map(f).collect())
    }

    pub fn zeros(grid: RadialGrid) -> Self {
        RadialFunction {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// `Int f sinh tau dtau dphi` over the disk.
    pub fn mass(&self) -> f64 {
        2.0 * PI * dot(&self.grid.measure_weights(), &self.values)
    }

    /// Norm in `L^2(sinh tau dtau)`.
    pub fn l2_norm(&self) -> f64 {
        let w = self.grid.measure_weights();
        self.values
            .iter()
            .zip(&w)
            .map(|(v, w)| w * v * v)
            .sum::<f64>()
            .max(0.0)
            .sqrt()
    }

    /// `||self - other|| / ||other||` in `L^2(sinh tau dtau)`.
    pub fn relative_l2_error(&self, other: &RadialFunction) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch("radial grids differ".into()));
        }
        let diff: Vec<f64> = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        let diff = RadialFunction {
            grid: self.grid,
            values: diff,
        };
        Ok(diff.l2_norm() / other.l2_norm())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Transform values `c(kappa_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub grid: SpectralGrid,
    values: Vec<f64>,
}

impl Spectrum {
    pub fn new(grid: SpectralGrid, values: Vec<f64>) -> Result<Self> {
        check_values(grid.len(), &values)?;
        Ok(Spectrum { grid, values })
    }

    pub fn zeros(grid: SpectralGrid) -> Self {
        Spectrum {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: f64, other: &Spectrum, b: f64) -> Result<Spectrum> {
        same_grid(self, other)?;
        let values = self.values.iter().zip(&other.values).map(|(x, y)| a * x + b * y).collect();
        Ok(Spectrum { grid: self.grid, values })
    }

    pub fn scale(&self, a: f64) -> Spectrum {
        Spectrum {
            grid: self.grid,
            values: self.values.iter().map(|v| a * v).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

fn check_values(len: usize, values: &[f64]) -> Result<()> {
    if values.len() != len {
        return Err(Error::GridMismatch(format!(
            "{} values for a grid of {len} nodes",
            values.len()
        )));
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::invalid("values", format!("non-finite value at index {i}")));
    }
    Ok(())
}

fn same_grid(a: &Spectrum, b: &Spectrum) -> Result<()> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch(format!(
            "spectral grids differ: ({}, {}) vs ({}, {})",
            a.grid.kappa_max, a.grid.n_kappa, b.grid.kappa_max, b.grid.n_kappa
        )));
    }
    Ok(())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Conical quadrature settings plus the threshold for truncation warnings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MftConfig {
    pub quadrature: QuadratureConfig,
    /// Warn when `|f sinh tau|` at `tau_max`, or `|c| kappa` at `kappa_max`, exceeds this.
    pub truncation_tolerance: f64,
}

impl Default for MftConfig {
    fn default() -> Self {
        MftConfig {
            quadrature: QuadratureConfig::default(),
            truncation_tolerance: 1e-4,
        }
    }
}

/// Discretized transform for one pair of grids: the table
/// `P_{-1/2+i kappa_i}(cosh tau_j)` and the quadrature weights of both directions.
#[derive(Debug)]
pub struct MehlerFock {
    radial: RadialGrid,
    spectral: SpectralGrid,
    /// `n_kappa x n_tau`
    table: DMatrix<f64>,
    measure: DVector<f64>,
    plancherel: DVector<f64>,
    truncation_tolerance: f64,
}

type CacheKey = ((u64, usize), (u64, usize), usize, u64);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<MehlerFock>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<MehlerFock>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

impl MehlerFock {
    pub fn new(radial: RadialGrid, spectral: SpectralGrid, cfg: &MftConfig) -> Result<Self> {
        cfg.quadrature.validate()?;
        let kappas = spectral.nodes();
        let columns: Vec<Vec<f64>> = radial
            .nodes()
            .par_iter()
            .map(|&tau| conical_p_sweep(0, &kappas, tau, &cfg.quadrature))
            .collect::<Result<_>>()?;
        let table = DMatrix::from_fn(spectral.len(), radial.len(), |i, j| columns[j][i]);
        Ok(MehlerFock {
            radial,
            spectral,
            table,
            measure: DVector::from_vec(radial.measure_weights()),
            plancherel: DVector::from_vec(spectral.plancherel_weights()),
            truncation_tolerance: cfg.truncation_tolerance,
        })
    }

    /// A process-wide cached instance for these grids and settings.
    pub fn shared(radial: RadialGrid, spectral: SpectralGrid, cfg: &MftConfig) -> Result<Arc<Self>> {
        let key = (
            radial.key(),
            spectral.key(),
            cfg.quadrature.n_theta,
            cfg.quadrature.tolerance.to_bits(),
        );
        if let Some(hit) = cache().lock().expect("transform cache poisoned").get(&key) {
            let mut hit = Arc::clone(hit);
            if hit.truncation_tolerance != cfg.truncation_tolerance {
                hit = Arc::new(hit.with_truncation_tolerance(cfg.truncation_tolerance));
            }
            return Ok(hit);
        }
        // built without holding the lock: construction runs on the rayon pool
        let built = Arc::new(MehlerFock::new(radial, spectral, cfg)?);
        let mut map = cache().lock().expect("transform cache poisoned");
        Ok(Arc::clone(map.entry(key).or_insert(built)))
    }

    fn with_truncation_tolerance(&self, truncation_tolerance: f64) -> Self {
        MehlerFock {
            radial: self.radial,
            spectral: self.spectral,
            table: self.table.clone(),
            measure: self.measure.clone(),
            plancherel: self.plancherel.clone(),
            truncation_tolerance,
        }
    }

    pub fn radial_grid(&self) -> RadialGrid {
        self.radial
    }

    pub fn spectral_grid(&self) -> SpectralGrid {
        self.spectral
    }

    /// `P_{-1/2+i kappa_i}(cosh tau_j)`, `n_kappa x n_tau`.
    pub fn table(&self) -> &DMatrix<f64> {
        &self.table
    }

    pub fn forward(&self, f: &RadialFunction) -> Result<Spectrum> {
        if f.grid != self.radial {
            return Err(Error::GridMismatch("radial function is not on the transform grid".into()));
        }
        let last = self.radial.len() - 1;
        let tail = (f.values[last] * self.radial.tau_max.sinh()).abs();
        if tail > self.truncation_tolerance {
            log::warn!(
                "forward transform truncated: |f sinh tau| = {tail:.3e} at tau_max = {}",
                self.radial.tau_max
            );
        }
        let weighted = DVector::from_iterator(
            f.values.len(),
            f.values.iter().zip(self.measure.iter()).map(|(v, w)| v * w),
        );
        let c = &self.table * weighted;
        Spectrum::new(self.spectral, c.as_slice().to_vec())
    }

    pub fn inverse(&self, c: &Spectrum) -> Result<RadialFunction> {
        self.check_spectrum(c)?;
        let weighted = DVector::from_iterator(
            c.values.len(),
            c.values.iter().zip(self.plancherel.iter()).map(|(v, w)| v * w),
        );
        let f = self.table.tr_mul(&weighted);
        RadialFunction::new(self.radial, f.as_slice().to_vec())
    }

    /// Inverse transforms of several spectra at once; column `k` of the result
    /// holds the radial samples for `spectra[k]`.
    pub fn inverse_batch(&self, spectra: &[Spectrum]) -> Result<DMatrix<f64>> {
        for c in spectra {
            self.check_spectrum(c)?;
        }
        let weighted = DMatrix::from_fn(self.spectral.len(), spectra.len(), |i, k| {
            spectra[k].values[i] * self.plancherel[i]
        });
        Ok(self.table.tr_mul(&weighted))
    }

    fn check_spectrum(&self, c: &Spectrum) -> Result<()> {
        if c.grid != self.spectral {
            return Err(Error::GridMismatch("spectrum is not on the transform grid".into()));
        }
        let last = self.spectral.len() - 1;
        let tail = (c.values[last] * self.spectral.kappa_max).abs();
        if tail > self.truncation_tolerance {
            log::warn!(
                "inverse transform truncated: |c kappa| = {tail:.3e} at kappa_max = {}",
                self.spectral.kappa_max
            );
        }
        Ok(())
    }
}

/// Forward transform onto `sgrid`, using the cached table.
pub fn mft_forward(f: &RadialFunction, sgrid: SpectralGrid, cfg: &MftConfig) -> Result<Spectrum> {
    MehlerFock::shared(f.grid, sgrid, cfg)?.forward(f)
}

/// Inverse transform onto `rgrid`, using the cached table.
pub fn mft_inverse(c: &Spectrum, rgrid: RadialGrid, cfg: &MftConfig) -> Result<RadialFunction> {
    MehlerFock::shared(rgrid, c.grid, cfg)?.inverse(c)
}

/// `Int c1 c2 kappa tanh(pi kappa) dkappa`.
pub fn parseval_inner(c1: &Spectrum, c2: &Spectrum) -> Result<f64> {
    same_grid(c1, c2)?;
    let w = c1.grid.plancherel_weights();
    Ok(c1.values.iter().zip(&c2.values).zip(&w).map(|((a, b), w)| w * a * b).sum())
}

pub fn parseval_distance(c1: &Spectrum, c2: &Spectrum) -> Result<f64> {
    same_grid(c1, c2)?;
    let w = c1.grid.plancherel_weights();
    let sq: f64 = c1
        .values
        .iter()
        .zip(&c2.values)
        .zip(&w)
        .map(|((a, b), w)| w * (a - b) * (a - b))
        .sum();
    Ok(sq.max(0.0).sqrt())
}

/// Heat flow for time `t`: `c(kappa) e^{-(1/4 + kappa^2) t}`.
pub fn heat_multiplier(c: &Spectrum, t: f64) -> Result<Spectrum> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::invalid("t", format!("must be finite and >= 0, got {t}")));
    }
    let values = c
        .grid
        .nodes()
        .iter()
        .zip(&c.values)
        .map(|(k, v)| v * (-(0.25 + k * k) * t).exp())
        .collect();
    Ok(Spectrum { grid: c.grid, values })
}
