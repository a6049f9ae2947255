//! Kernel density estimation on the disk with invariant radial kernels.
//!
//! A sample at `(phi_l, tau_l)` contributes `k(cosh d)`, `d` the hyperbolic
//! distance to the query. Expanding `k` by its transform and the conical
//! functions by the addition formula splits every contribution into a data
//! factor `e^{-i m phi_l} P^{-m}(cosh tau_l)` and a kernel factor, per angular
//! order `m` and spectral node `kappa`:
//!
//! ```text
//! f(tau, phi) = sum_m e^{i m phi} Int kappa tanh(pi kappa) S_m(kappa) P^m(cosh tau) dkappa
//! S_m(kappa)  = (-1)^m c_k(kappa) sum_l w_l e^{-i m phi_l} P^{-m}(cosh tau_l)
//! ```
//!
//! with `c_k` the (order 0) transform of the kernel. The `-m` term is the complex
//! conjugate pattern of the `+m` term, so only `m >= 0` is stored.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::conical::{conical_p_sweep, QuadratureConfig};
use crate::error::{Error, Result};
use crate::hypgeo::{relative_cosh, Coset, DiskPoint};
use crate::mft::{MehlerFock, MftConfig, RadialFunction, RadialGrid, SpectralGrid, Spectrum};

/// Radial and spectral grids with the transform settings used on them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grids {
    pub radial: RadialGrid,
    pub spectral: SpectralGrid,
    pub config: MftConfig,
}

impl Default for Grids {
    fn default() -> Self {
        Grids {
            radial: RadialGrid::new(12.0, 600).expect("valid default grid"),
            spectral: SpectralGrid::new(20.0, 400).expect("valid default grid"),
            config: MftConfig::default(),
        }
    }
}

impl Grids {
    pub fn transform(&self) -> Result<std::sync::Arc<MehlerFock>> {
        MehlerFock::shared(self.radial, self.spectral, &self.config)
    }
}

/// Kernel family; only powers of `cosh` ship.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelFamily {
    PowerCosh,
}

/// `k(cosh tau) = (s - 1) / (2 pi) * cosh(tau)^{-s}`, a pdf for `sinh tau dtau dphi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialKernel {
    family: KernelFamily,
    s: f64,
    normalization: f64,
}

impl RadialKernel {
    pub fn power_cosh(s: f64) -> Result<Self> {
        if !(s > 1.0) || !s.is_finite() {
            return Err(Error::invalid("s", format!("kernel exponent must be > 1, got {s}")));
        }
        Ok(RadialKernel {
            family: KernelFamily::PowerCosh,
            s,
            normalization: (s - 1.0) / (2.0 * PI),
        })
    }

    pub fn family(&self) -> KernelFamily {
        self.family
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// Kernel value at `x = cosh tau >= 1`.
    pub fn eval(&self, x: f64) -> f64 {
        match self.family {
            KernelFamily::PowerCosh => self.normalization * x.powf(-self.s),
        }
    }

    pub fn radial(&self, grid: RadialGrid) -> Result<RadialFunction> {
        RadialFunction::from_fn(grid, |tau| self.eval(tau.cosh()))
    }
}

/// Weighted sample points in coset coordinates; weights sum to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    points: Vec<Coset>,
    weights: Vec<f64>,
}

impl SampleSet {
    /// Uniform weights when `weights` is `None`; otherwise they are rescaled to sum to 1.
    pub fn new(points: Vec<Coset>, weights: Option<Vec<f64>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("samples", "at least one sample is required"));
        }
        let weights = match weights {
            None => vec![1.0 / points.len() as f64; points.len()],
            Some(w) => {
                if w.len() != points.len() {
                    return Err(Error::invalid(
                        "weights",
                        format!("{} weights for {} points", w.len(), points.len()),
                    ));
                }
                if w.iter().any(|x| !(*x >= 0.0) || !x.is_finite()) {
                    return Err(Error::invalid("weights", "must be finite and nonnegative"));
                }
                let total: f64 = w.iter().sum();
                if !(total > 0.0) {
                    return Err(Error::invalid("weights", "sum to zero"));
                }
                w.iter().map(|x| x / total).collect()
            }
        };
        Ok(SampleSet { points, weights })
    }

    pub fn from_disk_points(points: &[DiskPoint]) -> Result<Self> {
        Self::new(points.iter().map(|p| p.coset()).collect(), None)
    }

    pub fn points(&self) -> &[Coset] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Samples grouped by exact `tau`, in increasing `tau`.
    fn by_radius(&self) -> Vec<(f64, Vec<(f64, f64)>)> {
        let mut groups: BTreeMap<u64, Vec<(f64, f64)>> = BTreeMap::new();
        for (p, &w) in self.points.iter().zip(&self.weights) {
            groups.entry(p.tau.to_bits()).or_default().push((w, p.phi));
        }
        groups.into_iter().map(|(bits, g)| (f64::from_bits(bits), g)).collect()
    }
}

/// Complex spectrum on a spectral grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSpectrum {
    pub grid: SpectralGrid,
    pub values: Vec<Complex64>,
}

impl ComplexSpectrum {
    pub fn zeros(grid: SpectralGrid) -> Self {
        ComplexSpectrum {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn real_part(&self) -> Result<Spectrum> {
        Spectrum::new(self.grid, self.values.iter().map(|v| v.re).collect())
    }
}

/// Density given by its spectra `S_m`, `m = 0..=m_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskDensity {
    m_max: usize,
    spectra: Vec<ComplexSpectrum>,
    radial: RadialGrid,
    quadrature: QuadratureConfig,
}

impl DiskDensity {
    pub fn new(spectra: Vec<ComplexSpectrum>, grids: &Grids) -> Result<Self> {
        if spectra.is_empty() {
            return Err(Error::invalid("spectra", "need at least the m = 0 spectrum"));
        }
        if spectra.iter().any(|s| s.grid != grids.spectral) {
            return Err(Error::GridMismatch("spectrum not on the density grid".into()));
        }
        Ok(DiskDensity {
            m_max: spectra.len() - 1,
            spectra,
            radial: grids.radial,
            quadrature: grids.config.quadrature,
        })
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    pub fn spectral_grid(&self) -> SpectralGrid {
        self.spectra[0].grid
    }

    pub fn radial_grid(&self) -> RadialGrid {
        self.radial
    }

    /// `S_m` for `0 <= m <= m_max`.
    pub fn spectrum(&self, m: usize) -> Option<&ComplexSpectrum> {
        self.spectra.get(m)
    }

    /// The `m = 0` spectrum, which is real.
    pub fn zonal(&self) -> Result<Spectrum> {
        self.spectra[0].real_part()
    }

    /// Radial synthesis `R_m(tau) = Int kappa tanh(pi kappa) S_m P^m(cosh tau) dkappa` for all `m`.
    fn radial_parts(&self, tau: f64) -> Result<Vec<Complex64>> {
        let grid = self.spectral_grid();
        let kappas = grid.nodes();
        let w = grid.plancherel_weights();
        (0..=self.m_max)
            .map(|m| {
                let p = conical_p_sweep(m as i32, &kappas, tau, &self.quadrature)?;
                Ok(self.spectra[m]
                    .values
                    .iter()
                    .zip(&p)
                    .zip(&w)
                    .map(|((s, p), w)| s * (p * w))
                    .sum())
            })
            .collect()
    }

    fn combine(parts: &[Complex64], phi: f64) -> f64 {
        let mut v = parts[0].re;
        for (m, r) in parts.iter().enumerate().skip(1) {
            v += 2.0 * (r * Complex64::from_polar(1.0, m as f64 * phi)).re;
        }
        v
    }

    /// Synthesized value at a point; negative ringing is clipped to 0.
    pub fn evaluate(&self, point: DiskPoint) -> Result<f64> {
        let c = point.coset();
        Ok(self.evaluate_unclipped(c.phi, c.tau)?.max(0.0))
    }

    pub fn evaluate_unclipped(&self, phi: f64, tau: f64) -> Result<f64> {
        Ok(Self::combine(&self.radial_parts(tau)?, phi))
    }

    /// Clipped values on a polar grid, indexed `[phi_index][tau_index]`.
    pub fn evaluate_polar(&self, phis: &[f64], taus: &[f64]) -> Result<Vec<Vec<f64>>> {
        let mut v = self.evaluate_polar_unclipped(phis, taus)?;
        v.iter_mut().flatten().for_each(|x| *x = x.max(0.0));
        Ok(v)
    }

    /// Like [`evaluate_polar`](Self::evaluate_polar) but keeps the ringing.
    pub fn evaluate_polar_unclipped(&self, phis: &[f64], taus: &[f64]) -> Result<Vec<Vec<f64>>> {
        let parts: Vec<Vec<Complex64>> = taus
            .par_iter()
            .map(|&tau| self.radial_parts(tau))
            .collect::<Result<_>>()?;
        Ok(phis
            .iter()
            .map(|&phi| parts.iter().map(|p| Self::combine(p, phi)).collect())
            .collect())
    }

    /// The angular average (the `m = 0` part) on the radial grid.
    pub fn zonal_radial(&self) -> Result<RadialFunction> {
        let mf = MehlerFock::shared(self.radial, self.spectral_grid(), &MftConfig {
            quadrature: self.quadrature,
            ..MftConfig::default()
        })?;
        mf.inverse(&self.zonal()?)
    }

    /// `Int f sinh tau dtau dphi`; the angular integral keeps only `m = 0`.
    pub fn mass(&self) -> Result<f64> {
        Ok(self.zonal_radial()?.mass())
    }

    /// Rescales to unit mass and returns the factor applied.
    pub fn normalize(&mut self) -> Result<f64> {
        let mass = self.mass()?;
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::ZeroMass { mass });
        }
        let factor = 1.0 / mass;
        for s in &mut self.spectra {
            for v in &mut s.values {
                *v *= factor;
            }
        }
        Ok(factor)
    }
}

/// Rescales a sampled radial pdf to unit mass; returns it with the factor applied.
pub fn normalize_radial(f: &RadialFunction) -> Result<(RadialFunction, f64)> {
    let mass = f.mass();
    if !(mass > 0.0) || !mass.is_finite() {
        return Err(Error::ZeroMass { mass });
    }
    let factor = 1.0 / mass;
    let scaled = RadialFunction::new(f.grid, f.values().iter().map(|v| v * factor).collect())?;
    Ok((scaled, factor))
}

/// `w_{kappa m} = Int k(cosh tau) P^m(cosh tau) sinh tau dtau` on the radial grid.
pub fn kernel_weights(k: &RadialKernel, m: i32, grids: &Grids) -> Result<Spectrum> {
    let f = k.radial(grids.radial)?;
    if m == 0 {
        return grids.transform()?.forward(&f);
    }
    let kappas = grids.spectral.nodes();
    let taus = grids.radial.nodes();
    let columns: Vec<Vec<f64>> = taus
        .par_iter()
        .map(|&tau| conical_p_sweep(m, &kappas, tau, &grids.config.quadrature))
        .collect::<Result<_>>()?;
    let weights = grids.radial.measure_weights();
    let values = (0..kappas.len())
        .map(|i| {
            columns
                .iter()
                .zip(f.values())
                .zip(&weights)
                .map(|((col, fv), w)| col[i] * fv * w)
                .sum()
        })
        .collect();
    Spectrum::new(grids.spectral, values)
}

/// `sum_l w_l e^{-i m phi_l} P^{-m}(cosh tau_l)` at every spectral node.
pub fn data_coefficients(samples: &SampleSet, m: i32, grids: &Grids) -> Result<ComplexSpectrum> {
    let kappas = grids.spectral.nodes();
    let groups = samples.by_radius();
    let partial: Vec<Vec<Complex64>> = groups
        .par_iter()
        .map(|(tau, members)| {
            let phase: Complex64 = members
                .iter()
                .map(|&(w, phi)| Complex64::from_polar(w, -f64::from(m) * phi))
                .sum();
            let p = conical_p_sweep(-m, &kappas, *tau, &grids.config.quadrature)?;
            Ok(p.iter().map(|p| phase * p).collect())
        })
        .collect::<Result<_>>()?;
    let mut out = ComplexSpectrum::zeros(grids.spectral);
    for row in &partial {
        for (o, v) in out.values.iter_mut().zip(row) {
            *o += v;
        }
    }
    Ok(out)
}

/// `e^{-i m phi_l} P^{-m}(cosh tau_l)` for each sample separately (weights not applied).
pub fn data_coefficients_per_sample(samples: &SampleSet, m: i32, grids: &Grids) -> Result<Vec<ComplexSpectrum>> {
    let kappas = grids.spectral.nodes();
    samples
        .points
        .par_iter()
        .map(|p| {
            let phase = Complex64::from_polar(1.0, -f64::from(m) * p.phi);
            let values = conical_p_sweep(-m, &kappas, p.tau, &grids.config.quadrature)?
                .iter()
                .map(|v| phase * v)
                .collect();
            Ok(ComplexSpectrum {
                grid: grids.spectral,
                values,
            })
        })
        .collect()
}

/// Direct sum `sum_l w_l k(cosh d(sample_l, query))`.
pub fn kde_direct(samples: &SampleSet, k: &RadialKernel, query: DiskPoint) -> f64 {
    let q = query.coset();
    samples
        .points
        .iter()
        .zip(&samples.weights)
        .map(|(p, w)| w * k.eval(relative_cosh(p.tau, p.phi, q.tau, q.phi)))
        .sum()
}

/// The separated estimator with angular orders `0..=m_max`.
pub fn kde_spectral(samples: &SampleSet, k: &RadialKernel, m_max: usize, grids: &Grids) -> Result<DiskDensity> {
    let kernel = kernel_weights(k, 0, grids)?;
    let spectra = (0..=m_max)
        .map(|m| {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            let mut gamma = data_coefficients(samples, m as i32, grids)?;
            for (g, c) in gamma.values.iter_mut().zip(kernel.values()) {
                *g *= sign * c;
            }
            Ok(gamma)
        })
        .collect::<Result<Vec<_>>>()?;
    DiskDensity::new(spectra, grids)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypgeo::MoebiusElement;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_samples(rng: &mut ChaCha8Rng, n: usize, tau_max: f64) -> SampleSet {
        let pts = (0..n)
            .map(|_| Coset::new(rng.random_range(0.0..2.0 * PI), rng.random_range(0.0..tau_max)).unwrap())
            .collect();
        SampleSet::new(pts, None).unwrap()
    }

    #[test]
    fn kernel_validation_and_peak() {
        assert!(RadialKernel::power_cosh(1.0).is_err());
        let k = RadialKernel::power_cosh(4.0).unwrap();
        let s = SampleSet::new(vec![Coset::new(0.0, 0.0).unwrap()], None).unwrap();
        assert!((kde_direct(&s, &k, DiskPoint::ORIGIN) - 3.0 / (2.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn sample_weights_are_normalized() {
        let pts = vec![Coset::new(0.0, 1.0).unwrap(), Coset::new(1.0, 2.0).unwrap()];
        let s = SampleSet::new(pts.clone(), Some(vec![2.0, 6.0])).unwrap();
        assert_eq!(s.weights(), &[0.25, 0.75]);
        assert!(SampleSet::new(pts.clone(), Some(vec![0.0, 0.0])).is_err());
        assert!(SampleSet::new(pts, Some(vec![1.0, -1.0])).is_err());
        assert!(SampleSet::new(vec![], None).is_err());
    }

    #[test]
    fn antipodal_pair_at_origin() {
        let k = RadialKernel::power_cosh(3.0).unwrap();
        let one = SampleSet::new(vec![Coset::new(0.3, 1.1).unwrap()], None).unwrap();
        let two = SampleSet::new(vec![Coset::new(0.3, 1.1).unwrap(), Coset::new(0.3 + PI, 1.1).unwrap()], None).unwrap();
        let a = kde_direct(&one, &k, DiskPoint::ORIGIN);
        let b = kde_direct(&two, &k, DiskPoint::ORIGIN);
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn direct_estimate_is_invariant() {
        let k = RadialKernel::power_cosh(2.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let samples = random_samples(&mut rng, 10, 2.0);
        let query = DiskPoint::from_re_im(0.2, -0.3).unwrap();
        let before = kde_direct(&samples, &k, query);
        for _ in 0..50 {
            let g = MoebiusElement::from_cartan(
                rng.random_range(0.0..2.0 * PI),
                rng.random_range(0.0..1.5),
                rng.random_range(0.0..2.0 * PI),
            )
            .unwrap();
            let moved: Vec<DiskPoint> = samples
                .points()
                .iter()
                .map(|c| g.apply(DiskPoint::from_coset(*c)))
                .collect();
            let moved = SampleSet::from_disk_points(&moved).unwrap();
            let after = kde_direct(&moved, &k, g.apply(query));
            assert!((after - before).abs() < 1e-10, "{after} vs {before}");
        }
    }

    #[test]
    fn kernel_weights_order_zero_is_forward_transform() {
        let grids = Grids::default();
        let k = RadialKernel::power_cosh(2.0).unwrap();
        let w = kernel_weights(&k, 0, &grids).unwrap();
        let f = grids.transform().unwrap().forward(&k.radial(grids.radial).unwrap()).unwrap();
        assert_eq!(w, f);
        // normalized s = 2 kernel at kappa_10, against arbitrary-precision quadrature
        let want = 0.726583934984327 / (2.0 * PI);
        assert!((w.values()[10] - want).abs() < 1e-6);
    }

    #[test]
    fn kernel_weights_of_opposite_orders() {
        // w_{kappa,-3} = -w_{kappa,3} / prod_{j<=3} ((j - 1/2)^2 + kappa^2)
        let grids = Grids::default();
        let k = RadialKernel::power_cosh(3.0).unwrap();
        let plus = kernel_weights(&k, 3, &grids).unwrap();
        let minus = kernel_weights(&k, -3, &grids).unwrap();
        for (i, kappa) in grids.spectral.nodes().iter().enumerate().step_by(37) {
            let d: f64 = (1..=3).map(|j| (j as f64 - 0.5).powi(2) + kappa * kappa).product();
            let want = -plus.values()[i] / d;
            assert!((minus.values()[i] - want).abs() < 1e-9 * want.abs().max(1e-12), "{kappa}");
        }
    }

    #[test]
    fn data_coefficients_cases() {
        let grids = Grids::default();
        let origin = SampleSet::new(vec![Coset::new(0.0, 0.0).unwrap()], None).unwrap();
        let g0 = data_coefficients(&origin, 0, &grids).unwrap();
        assert!(g0.values.iter().all(|v| *v == Complex64::new(1.0, 0.0)));
        let g2 = data_coefficients(&origin, 2, &grids).unwrap();
        assert!(g2.values.iter().all(|v| v.norm() == 0.0));

        let single = SampleSet::new(vec![Coset::new(0.4, 1.2).unwrap()], None).unwrap();
        let g1 = data_coefficients(&single, 1, &grids).unwrap();
        // kappa = 0.7 is not a default node; use a grid through it
        let grid07 = Grids {
            spectral: SpectralGrid::new(0.7 * 39.0, 40).unwrap(),
            ..grids
        };
        let g = data_coefficients(&single, 1, &grid07).unwrap();
        let want = Complex64::from_polar(0.4687083427922786, -0.4);
        assert!((g.values[1] - want).norm() < 1e-12, "{}", g.values[1]);
        let per = data_coefficients_per_sample(&single, 1, &grids).unwrap();
        assert_eq!(per[0].values, g1.values);
    }

    #[test]
    fn spectral_single_origin_sample_is_the_kernel() {
        let grids = Grids::default();
        let k = RadialKernel::power_cosh(4.0).unwrap();
        let origin = SampleSet::new(vec![Coset::new(0.0, 0.0).unwrap()], None).unwrap();
        let d = kde_spectral(&origin, &k, 4, &grids).unwrap();
        for m in 1..=4 {
            assert!(d.spectrum(m).unwrap().values.iter().all(|v| v.norm() == 0.0));
        }
        for tau in [0.0, 0.5, 1.5, 3.0] {
            let got = d.evaluate_unclipped(0.7, tau).unwrap();
            assert!((got - k.eval(tau.cosh())).abs() < 1e-4, "tau={tau}: {got}");
        }
    }

    #[test]
    fn spectral_matches_direct_for_a_few_samples() {
        let grids = Grids::default();
        let k = RadialKernel::power_cosh(4.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let samples = random_samples(&mut rng, 5, 1.5);
        let d = kde_spectral(&samples, &k, 32, &grids).unwrap();
        let mut worst = 0.0f64;
        let mut peak = 0.0f64;
        for _ in 0..10 {
            let q = Coset::new(rng.random_range(0.0..2.0 * PI), rng.random_range(0.0..1.5)).unwrap();
            let direct = kde_direct(&samples, &k, DiskPoint::from_coset(q));
            let spectral = d.evaluate_unclipped(q.phi, q.tau).unwrap();
            worst = worst.max((direct - spectral).abs());
            peak = peak.max(direct);
        }
        assert!(worst < 1e-2 * peak, "{worst} vs peak {peak}");
    }

    #[test]
    fn normalization_factors() {
        let grids = Grids::default();
        let k = RadialKernel::power_cosh(4.0).unwrap();
        let (_, factor) = normalize_radial(&k.radial(grids.radial).unwrap()).unwrap();
        assert!((factor - 1.0).abs() < 1e-3);
        let five = RadialFunction::from_fn(grids.radial, |t| 5.0 * k.eval(t.cosh())).unwrap();
        let (_, f5) = normalize_radial(&five).unwrap();
        assert!((f5 - 0.2 * factor).abs() < 1e-12);
        assert!(matches!(
            normalize_radial(&RadialFunction::zeros(grids.radial)),
            Err(Error::ZeroMass { .. })
        ));
    }
}
