//! Conical (Mehler) functions `P^m_{-1/2 + i kappa}(cosh tau)`.
//!
//! The functions are evaluated from the integral representation
//!
//! ```text
//! P^m_a(cosh tau) = Gamma(a+m+1) / (2 pi Gamma(a+1)) * Int_0^{2pi} (sinh tau cos th + cosh tau)^a e^{i m th} dth
//! ```
//!
//! with `a = -1/2 + i kappa`. The Gamma ratio is the finite product
//! `(a+1)(a+2)...(a+m)` (its reciprocal for negative `m`).
//!
//! The integrand is nearly singular at `th = pi` once `tau` grows, since
//! `u = sinh tau cos th + cosh tau` drops to `e^{-tau}` there. The quadrature
//! therefore runs in the variable `phi` defined by `ln u = -tau cos phi`. In
//! that variable the integrand is smooth and periodic, and the trapezoid rule
//! converges geometrically. Its bandwidth is about `kappa * tau + |m|`.
//!
//! For small `tau` the harmonic being extracted is tiny compared with the
//! integrand, and the quadrature loses relative accuracy. In that regime the
//! integral is summed as its exact Fourier-coefficient series instead:
//! `u^a = cosh(tau/2)^{2a} (1 + t e^{i th})^a (1 + t e^{-i th})^a` with
//! `t = tanh(tau/2)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Node count and realness tolerance for the integral.
///
/// `n_theta` is the number of trapezoid nodes over one full period, and it is
/// a lower bound. Evaluations whose bandwidth needs more nodes use more.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    pub n_theta: usize,
    pub tolerance: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            n_theta: 256,
            tolerance: 1e-8,
        }
    }
}

impl QuadratureConfig {
    pub fn new(n_theta: usize, tolerance: f64) -> Result<Self> {
        let cfg = QuadratureConfig { n_theta, tolerance };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_theta < 16 || self.n_theta % 2 != 0 {
            return Err(Error::invalid(
                "n_theta",
                format!("must be even and >= 16, got {}", self.n_theta),
            ));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::invalid("tolerance", "must be positive"));
        }
        Ok(())
    }
}

/// Angular order and spectral parameter of a conical function; `kappa` is stored as `|kappa|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConicalOrder {
    pub m: i32,
    kappa: f64,
}

impl ConicalOrder {
    pub fn new(m: i32, kappa: f64) -> Result<Self> {
        if !kappa.is_finite() {
            return Err(Error::invalid("kappa", "must be finite"));
        }
        Ok(ConicalOrder {
            m,
            kappa: kappa.abs(),
        })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// The degree `-1/2 + i kappa`.
    pub fn degree(&self) -> Complex64 {
        Complex64::new(-0.5, self.kappa)
    }

    pub fn eval(&self, tau: f64, cfg: &QuadratureConfig) -> Result<f64> {
        conical_p(self.m, self.kappa, tau, cfg)
    }
}

/// `Gamma(a+m+1) / Gamma(a+1)` for `a = -1/2 + i kappa`, as a finite product.
pub fn gamma_ratio(m: i32, kappa: f64) -> Complex64 {
    gamma_ratio_alpha(m, Complex64::new(-0.5, kappa))
}

/// `P^m_{-1/2+i kappa}(cosh tau)`.
///
/// `kappa` and `-kappa` give the same value. Fails when the residual
/// imaginary part of the evaluation exceeds `cfg.tolerance * max(1, |value|)`.
pub fn conical_p(m: i32, kappa: f64, tau: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_args(kappa, tau)?;
    let kappa = kappa.abs();
    if tau == 0.0 {
        return Ok(at_origin(m));
    }
    let value = match try_series(m, Complex64::new(-0.5, kappa), tau) {
        Some(v) => v,
        None => {
            let n = cfg.n_theta.max(required_nodes(m, kappa, tau));
            let nodes = QuadratureNodes::new(m, tau, n);
            gamma_ratio(m, kappa) * nodes.integrate(kappa)
        }
    };
    real_part(value, m, kappa, tau, cfg)
}

/// `P^m` at every `(kappa_grid[i], tau_grid[j])`; row `i`, column `j`.
///
/// Entries are bit-identical to [`conical_p`] calls.
pub fn conical_p_grid(
    m: i32,
    kappa_grid: &[f64],
    tau_grid: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Vec<Vec<f64>>> {
    ensure_sorted("kappa_grid", kappa_grid)?;
    ensure_sorted("tau_grid", tau_grid)?;
    kappa_grid
        .par_iter()
        .enumerate()
        .map(|(i, &kappa)| {
            tau_grid
                .iter()
                .enumerate()
                .map(|(j, &tau)| {
                    conical_p(m, kappa, tau, cfg).map_err(|e| Error::GridQuadrature {
                        row: i,
                        col: j,
                        source: Box::new(e),
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect()
}

/// `P^m` at one `tau` for many `kappa`, sharing the quadrature nodes.
///
/// Agrees with [`conical_p`] to rounding, but not bit-for-bit: the whole sweep
/// uses the node count of its most demanding `kappa`.
pub fn conical_p_sweep(m: i32, kappas: &[f64], tau: f64, cfg: &QuadratureConfig) -> Result<Vec<f64>> {
    for &k in kappas {
        check_args(k, tau)?;
    }
    if tau == 0.0 {
        return Ok(vec![at_origin(m); kappas.len()]);
    }
    let kappas: Vec<f64> = kappas.iter().map(|k| k.abs()).collect();
    let series: Vec<Option<Complex64>> = kappas
        .iter()
        .map(|&k| try_series(m, Complex64::new(-0.5, k), tau))
        .collect();
    let mut values: Vec<Complex64> = series.iter().map(|v| v.unwrap_or_default()).collect();

    let quad: Vec<usize> = (0..kappas.len()).filter(|&i| series[i].is_none()).collect();
    if !quad.is_empty() {
        let n = quad
            .iter()
            .map(|&i| required_nodes(m, kappas[i], tau))
            .fold(cfg.n_theta, usize::max);
        let nodes = QuadratureNodes::new(m, tau, n);
        let qk: Vec<f64> = quad.iter().map(|&i| kappas[i]).collect();
        for (&i, q) in quad.iter().zip(nodes.integrate_many(&qk)) {
            values[i] = gamma_ratio(m, kappas[i]) * q;
        }
    }
    values
        .iter()
        .zip(&kappas)
        .map(|(&v, &k)| real_part(v, m, k, tau, cfg))
        .collect()
}

/// Truncated addition series for two points at angular separation `theta`,
/// `sum_{|m| <= m_max} (-1)^m P^{-m}(cosh tau_l) P^m(cosh tau_0) e^{-i m theta}`.
///
/// The full series sums to `P(cosh tau_l cosh tau_0 - sinh tau_l sinh tau_0 cos theta)`,
/// i.e. `P` at [`relative_cosh`](crate::hypgeo::relative_cosh)`(tau_l, theta, tau_0, 0)`.
/// Fails when the last included pair of terms exceeds `cfg.tolerance`.
pub fn addition_series(
    kappa: f64,
    tau_l: f64,
    tau_0: f64,
    theta: f64,
    m_max: usize,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let m_max = i32::try_from(m_max).map_err(|_| Error::invalid("m_max", "too large"))?;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut last = 0.0;
    for m in -m_max..=m_max {
        let term = conical_p(-m, kappa, tau_l, cfg)?
            * conical_p(m, kappa, tau_0, cfg)?
            * Complex64::from_polar(1.0, -f64::from(m) * (theta + PI));
        sum += term;
        if m.abs() == m_max {
            last = f64::max(last, term.norm());
        }
    }
    // a single m = 0 term is the whole series only when one point is the origin
    let exact = m_max == 0 && (tau_l == 0.0 || tau_0 == 0.0);
    if !exact && last > cfg.tolerance {
        return Err(Error::NotConverged { last_term: last });
    }
    if sum.im.abs() > cfg.tolerance * sum.re.abs().max(1.0) {
        return Err(Error::Quadrature {
            m: m_max,
            kappa,
            tau: tau_0,
            imag: sum.im,
        });
    }
    Ok(sum.re)
}

fn check_args(kappa: f64, tau: f64) -> Result<()> {
    if !kappa.is_finite() {
        return Err(Error::invalid("kappa", "must be finite"));
    }
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(Error::invalid("tau", format!("must be finite and >= 0, got {tau}")));
    }
    Ok(())
}

fn ensure_sorted(name: &'static str, grid: &[f64]) -> Result<()> {
    if grid.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::invalid(name, "must be sorted ascending"));
    }
    Ok(())
}

fn at_origin(m: i32) -> f64 {
    if m == 0 {
        1.0
    } else {
        0.0
    }
}

fn real_part(value: Complex64, m: i32, kappa: f64, tau: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !value.re.is_finite() || value.im.abs() > cfg.tolerance * value.re.abs().max(1.0) {
        return Err(Error::Quadrature {
            m,
            kappa,
            tau,
            imag: value.im,
        });
    }
    Ok(value.re)
}

/// Largest tolerated ratio of the biggest series term to the sum.
const SERIES_MAX_LOSS: f64 = 1e4;

/// The series value, when it converges fast enough and without heavy cancellation.
fn try_series(m: i32, a: Complex64, tau: f64) -> Option<Complex64> {
    // order 0 is the mean of the integrand, which the quadrature gets without
    // cancellation; the series also converges slowly near the boundary
    if m == 0 || (0.5 * tau).tanh() > 0.95 {
        return None;
    }
    let (sum, loss) = series_value_signed(m, a, tau);
    (loss <= SERIES_MAX_LOSS).then(|| gamma_ratio_alpha(m, a) * sum)
}

/// Trapezoid nodes (full period) needed to resolve the substituted integrand.
fn required_nodes(m: i32, kappa: f64, tau: f64) -> usize {
    let bandwidth = kappa.abs() * tau + f64::from(m.unsigned_abs());
    let n = (1.25 * bandwidth).ceil() as usize + 64;
    n.div_ceil(8) * 8
}

fn gamma_ratio_alpha(m: i32, a: Complex64) -> Complex64 {
    let mut p = Complex64::new(1.0, 0.0);
    if m >= 0 {
        for j in 1..=m {
            p *= a + f64::from(j);
        }
    } else {
        for j in (m + 1)..=0 {
            p /= a + f64::from(j);
        }
    }
    p
}

/// The normalized integral `(1/2pi) Int u^a e^{i m th} dth` from the series
/// `c^{2a} sum_j binom(a, j) binom(a, j+|m|) t^{2j+|m|}`, `c = cosh(tau/2)`.
///
/// Also returns the cancellation ratio `max |term| / |sum|`.
fn series_value_signed(m: i32, a: Complex64, tau: f64) -> (Complex64, f64) {
    let order = m.unsigned_abs() as usize;
    let t = (0.5 * tau).tanh();
    let t2 = t * t;
    // binom(a, |m|) t^{|m|}
    let mut upper = Complex64::new(1.0, 0.0);
    for i in 0..order {
        upper *= (a - i as f64) / (i as f64 + 1.0) * t;
    }
    let mut lower = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    let growth = a.norm();
    let mut biggest = 0.0f64;
    for j in 0..4000usize {
        let term = lower * upper;
        sum += term;
        biggest = biggest.max(term.norm());
        if j as f64 > growth && term.norm() <= 1e-17 * sum.norm() {
            break;
        }
        let jf = j as f64;
        lower *= (a - jf) / (jf + 1.0);
        upper *= (a - jf - order as f64) / (jf + order as f64 + 1.0) * t2;
    }
    let scale = (2.0 * a * (0.5 * tau).cosh().ln()).exp();
    let loss = if sum.norm() > 0.0 { biggest / sum.norm() } else { f64::INFINITY };
    (scale * sum, loss)
}

/// Nodes of the trapezoid rule in the variable `phi` with `ln u = -tau cos phi`.
///
/// The integrand is even in `phi`, so only `phi in [0, pi]` is stored, with the
/// interior nodes counted twice.
struct QuadratureNodes {
    /// `t = ln u` at each node
    log_u: Vec<f64>,
    /// endpoint factor * Jacobian * e^{-t/2} * cos(m th) / n
    weight: Vec<f64>,
}

impl QuadratureNodes {
    fn new(m: i32, tau: f64, n: usize) -> Self {
        let half = n / 2;
        let (sinh_tau, _) = (tau.sinh(), tau.cosh());
        let mut log_u = Vec::with_capacity(half + 1);
        let mut weight = Vec::with_capacity(half + 1);
        for j in 0..=half {
            let phi = 2.0 * PI * j as f64 / n as f64;
            let (s, c) = (0.5 * phi).sin_cos();
            let t = -tau * phi.cos();
            let lo = 2.0 * tau * s * s;
            let hi = 2.0 * tau * c * c;
            // dth/dphi, written to stay accurate as tau -> 0
            let jacobian = (0.5 * (t + tau)).exp() / (expm1_ratio(lo) * expm1_ratio(hi)).sqrt();
            // 1 + cos th and 1 - cos th
            let one_plus = (-tau).exp() * lo.exp_m1() / sinh_tau;
            let one_minus = t.exp() * hi.exp_m1() / sinh_tau;
            let theta = (one_plus * one_minus).max(0.0).sqrt().atan2(0.5 * (one_plus - one_minus));
            let end = if j == 0 || j == half { 1.0 } else { 2.0 };
            log_u.push(t);
            weight.push(end * jacobian * (-0.5 * t).exp() * (f64::from(m) * theta).cos() / n as f64);
        }
        QuadratureNodes { log_u, weight }
    }

    /// `(1/2pi) Int u^{-1/2 + i kappa} e^{i m th} dth` for signed `kappa`.
    fn integrate(&self, kappa: f64) -> Complex64 {
        self.log_u
            .iter()
            .zip(&self.weight)
            .map(|(&t, &w)| Complex64::from_polar(w, kappa * t))
            .sum()
    }

    fn integrate_many(&self, kappas: &[f64]) -> Vec<Complex64> {
        const RESYNC: usize = 32;
        let uniform = is_uniform(kappas);
        let step = if kappas.len() > 1 { kappas[1] - kappas[0] } else { 0.0 };
        let rotation: Vec<Complex64> = self
            .log_u
            .iter()
            .map(|&t| Complex64::from_polar(1.0, step * t))
            .collect();
        let mut phasor = vec![Complex64::new(0.0, 0.0); self.log_u.len()];
        kappas
            .iter()
            .enumerate()
            .map(|(i, &kappa)| {
                if !uniform || i % RESYNC == 0 {
                    for (p, &t) in phasor.iter_mut().zip(&self.log_u) {
                        *p = Complex64::from_polar(1.0, kappa * t);
                    }
                } else {
                    for (p, r) in phasor.iter_mut().zip(&rotation) {
                        *p *= r;
                    }
                }
                phasor.iter().zip(&self.weight).map(|(p, &w)| p * w).sum()
            })
            .collect()
    }
}

fn is_uniform(xs: &[f64]) -> bool {
    if xs.len() < 3 {
        return xs.len() == 2;
    }
    let step = xs[1] - xs[0];
    let scale = xs.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
    xs.windows(2)
        .enumerate()
        .all(|(i, w)| ((w[1] - w[0]) - step).abs() <= 1e-12 * scale && (xs[0] + step * (i + 1) as f64 - w[1]).abs() <= 1e-12 * scale)
}

/// `expm1(x) / x`, equal to 1 at 0.
fn expm1_ratio(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.exp_m1() / x
    }
}

/// Direct evaluation of the integral for a signed `kappa` (degree `-1/2 + i kappa`).
#[cfg(test)]
fn conical_signed(m: i32, kappa: f64, tau: f64, n: usize) -> Complex64 {
    let a = Complex64::new(-0.5, kappa);
    try_series(m, a, tau).unwrap_or_else(|| gamma_ratio_alpha(m, a) * QuadratureNodes::new(m, tau, n).integrate(kappa))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    // P^m_{-1/2+i kappa}(cosh tau) from arbitrary-precision hypergeometric
    // evaluation (mpmath legenp, type 3), frozen here.
    const REFERENCE: &[(i32, f64, f64, f64)] = &[
        (0, 1.0, 1.0, 0.7220752282793745),
        (1, 1.0, 1.0, -0.49202359108530613),
        (-1, 0.7, 1.2, 0.4687083427922786),
        (2, 1.0, 2.0, 0.733665160786446),
        (3, 0.5, 0.3, -0.004456560413647256),
        (0, 5.0, 4.0, 0.06439514775023832),
        (0, 20.0, 8.0, -0.0024466186443657233),
        (0, 20.0, 12.0, 0.0005638893215788644),
        (4, 10.0, 6.0, -188.09418028819786),
        (8, 20.0, 8.0, -123775731.96293496),
        (16, 20.0, 0.1, 531002571.14497805),
        (16, 20.0, 8.0, -1.6047920582188644e18),
    ];

    #[test]
    fn matches_reference_values() {
        for &(m, kappa, tau, want) in REFERENCE {
            let got = conical_p(m, kappa, tau, &cfg()).unwrap();
            assert!(
                (got - want).abs() <= 1e-12 * want.abs().max(1.0),
                "m={m} kappa={kappa} tau={tau}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn high_orders_keep_relative_accuracy() {
        for (m, kappa, tau, want) in [
            (32, 20.0, 1.5, 1.350134563722893e43),
            (-32, 15.0, 0.8, 4.2042501441166255e-50),
            (28, 6.0, 3.0, -1.0071732713434578e31),
            (25, 0.8, 1.1, f64::NAN),
        ] {
            let got = conical_p(m, kappa, tau, &cfg()).unwrap();
            if want.is_finite() {
                assert!((got - want).abs() < 1e-8 * want.abs(), "m={m}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn origin_values_are_exact() {
        for kappa in [0.0, 0.5, 1.0, 5.0, 20.0] {
            assert_eq!(conical_p(0, kappa, 0.0, &cfg()).unwrap(), 1.0);
            assert_eq!(conical_p(1, kappa, 0.0, &cfg()).unwrap(), 0.0);
            assert_eq!(conical_p(-1, kappa, 0.0, &cfg()).unwrap(), 0.0);
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(conical_p(0, 1.0, -0.5, &cfg()).is_err());
        assert!(conical_p(0, f64::NAN, 0.5, &cfg()).is_err());
        assert!(QuadratureConfig::new(15, 1e-8).is_err());
        assert!(QuadratureConfig::new(18, 1e-8).is_ok());
        assert!(QuadratureConfig::new(17, 1e-8).is_err());
        assert!(QuadratureConfig::new(256, 0.0).is_err());
    }

    #[test]
    fn gamma_ratio_matches_recurrence() {
        let a = Complex64::new(-0.5, 1.3);
        assert!((gamma_ratio(2, 1.3) - (a + 1.0) * (a + 2.0)).norm() < 1e-14);
        assert!((gamma_ratio(-2, 1.3) - 1.0 / (a * (a - 1.0))).norm() < 1e-14);
        assert_eq!(gamma_ratio(0, 1.3), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn hobson_reflection_between_orders() {
        // P^{-m} = (-1)^m P^m / prod_{j<=m} ((j - 1/2)^2 + kappa^2)
        for (m, kappa, tau) in [(3, 0.5, 0.5), (3, 1.0, 2.0), (5, 3.0, 1.5), (2, 0.0, 4.0)] {
            let plus = conical_p(m, kappa, tau, &cfg()).unwrap();
            let minus = conical_p(-m, kappa, tau, &cfg()).unwrap();
            let denom: f64 = (1..=m).map(|j| (f64::from(j) - 0.5).powi(2) + kappa * kappa).product();
            let want = if m % 2 == 0 { plus / denom } else { -plus / denom };
            assert!((minus - want).abs() < 1e-12 * want.abs().max(1e-300), "{minus} vs {want}");
        }
    }

    #[test]
    fn kappa_sign_symmetry() {
        for m in [0, 1, 3, -2] {
            for kappa in [0.3, 2.0, 7.5, 19.0] {
                for tau in [0.2, 1.0, 3.0, 7.0] {
                    let n = QuadratureConfig::default().n_theta.max(required_nodes(m, kappa, tau));
                    let plus = conical_signed(m, kappa, tau, n);
                    let minus = conical_signed(m, -kappa, tau, n);
                    let scale = plus.re.abs().max(1.0);
                    assert!((plus.re - minus.re).abs() < 1e-9 * scale, "{plus} vs {minus}");
                }
            }
        }
    }

    #[test]
    fn realness_over_parameter_box() {
        let cfg = cfg();
        for m in -16..=16 {
            for ik in 0..=8 {
                let kappa = 2.5 * f64::from(ik);
                for it in 0..=16 {
                    let tau = 0.5 * f64::from(it);
                    let v = if tau == 0.0 {
                        Complex64::new(at_origin(m), 0.0)
                    } else {
                        let n = cfg.n_theta.max(required_nodes(m, kappa, tau));
                        conical_signed(m, kappa, tau, n)
                    };
                    assert!(
                        v.im.abs() / v.re.abs().max(1.0) < 1e-9,
                        "m={m} kappa={kappa} tau={tau}: {v}"
                    );
                }
            }
        }
    }

    #[test]
    fn doubling_nodes_changes_little() {
        let coarse = cfg();
        let fine = QuadratureConfig::new(512, 1e-8).unwrap();
        for m in [0, 2, 5] {
            for kappa in [0.0, 1.0, 4.0, 12.0] {
                for tau in [0.5, 2.0, 5.0] {
                    let a = conical_p(m, kappa, tau, &coarse).unwrap();
                    let b = conical_p(m, kappa, tau, &fine).unwrap();
                    assert!((a - b).abs() < 1e-10 * a.abs().max(1.0), "{a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn decays_like_exp_minus_half_tau() {
        for kappa in [0.0, 0.5, 2.0, 10.0] {
            let bound = (0..=60)
                .map(|i| {
                    let tau = 0.2 * f64::from(i);
                    conical_p(0, kappa, tau, &cfg()).unwrap().abs() * (0.5 * tau).exp()
                })
                .fold(0.0, f64::max);
            // kappa = 0 grows like tau; elsewhere the envelope stays O(1)
            assert!(bound < 10.0, "kappa={kappa}: {bound}");
        }
    }

    #[test]
    fn grid_matches_scalar_calls_bitwise() {
        let kappas = [0.0, 0.7, 3.0, 11.0];
        let taus = [0.0, 1.0, 6.5];
        let grid = conical_p_grid(2, &kappas, &taus, &cfg()).unwrap();
        assert_eq!(grid.len(), 4);
        for (i, row) in grid.iter().enumerate() {
            assert_eq!(row.len(), 3);
            for (j, &v) in row.iter().enumerate() {
                assert_eq!(v.to_bits(), conical_p(2, kappas[i], taus[j], &cfg()).unwrap().to_bits());
            }
        }
        assert_eq!(conical_p_grid(0, &[0.5], &[0.0], &cfg()).unwrap(), vec![vec![1.0]]);
        assert!(conical_p_grid(0, &[1.0, 0.5], &[0.0], &cfg()).is_err());
    }

    #[test]
    fn sweep_agrees_with_scalar() {
        let kappas: Vec<f64> = (0..200).map(|i| 0.1 * i as f64).collect();
        for m in [0, 3, -2] {
            for tau in [0.05, 0.8, 3.0, 9.0] {
                let sweep = conical_p_sweep(m, &kappas, tau, &cfg()).unwrap();
                for (k, s) in kappas.iter().zip(&sweep) {
                    let v = conical_p(m, *k, tau, &cfg()).unwrap();
                    assert!((v - s).abs() < 1e-11 * v.abs().max(1.0), "m={m} k={k} tau={tau}: {v} vs {s}");
                }
            }
        }
        // non-uniform kappa lists take the direct path
        let odd = [0.2, 0.9, 5.0];
        let sweep = conical_p_sweep(1, &odd, 2.0, &cfg()).unwrap();
        for (k, s) in odd.iter().zip(&sweep) {
            assert!((conical_p(1, *k, 2.0, &cfg()).unwrap() - s).abs() < 1e-12);
        }
    }

    #[test]
    fn addition_series_cases() {
        let cfg = cfg();
        let direct = conical_p(0, 1.3, 0.9, &cfg).unwrap();
        for m_max in [0, 3, 10] {
            let s = addition_series(1.3, 0.0, 0.9, 0.7, m_max, &cfg).unwrap();
            assert!((s - direct).abs() < 1e-14);
        }

        let rel = crate::hypgeo::relative_cosh(0.7, 0.4, 1.1, 0.0);
        let want = conical_p(0, 0.8, rel.acosh(), &cfg).unwrap();
        let got = addition_series(0.8, 0.7, 1.1, 0.4, 40, &cfg).unwrap();
        assert!((got - want).abs() < 1e-6, "{got} vs {want}");

        let same = addition_series(2.0, 0.5, 0.5, 0.0, 40, &cfg).unwrap();
        assert!((same - 1.0).abs() < 1e-10);

        assert!(matches!(
            addition_series(0.8, 1.5, 1.5, 0.3, 2, &cfg),
            Err(Error::NotConverged { .. })
        ));
        assert!(matches!(
            addition_series(0.8, 1.5, 1.5, 0.3, 0, &cfg),
            Err(Error::NotConverged { .. })
        ));
    }
}
