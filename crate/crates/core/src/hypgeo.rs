//! The group SU(1,1) acting on the open unit disk.
//!
//! Elements are stored as the pair `(a, b)` of the matrix
//! `[[a, b], [conj(b), conj(a)]]` with `|a|^2 - |b|^2 = 1`. They act on the
//! disk by Möbius transforms. Disk points are identified with cosets
//! `SU(1,1)/K` through `z = tanh(tau/2) e^{i phi}`, and `tau` is the hyperbolic
//! distance of `z` from the origin.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest admissible modulus of a [`DiskPoint`].
pub const MAX_RADIUS: f64 = 1.0 - 1e-9;

const UNIMODULAR_TOL: f64 = 1e-12;
const ORIGIN_TAU: f64 = 1e-14;

/// Reduce an angle to `[0, 2pi)`.
pub fn reduce_angle(angle: f64) -> f64 {
    let r = angle.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2pi for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// A point of the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint(Complex64);

impl DiskPoint {
    pub const ORIGIN: DiskPoint = DiskPoint(Complex64 { re: 0.0, im: 0.0 });

    /// Rejects points with `|z| >= 1 - 1e-9`.
    pub fn new(z: Complex64) -> Result<Self> {
        let modulus = z.norm();
        if !modulus.is_finite() || modulus >= MAX_RADIUS {
            return Err(Error::OutsideDisk { modulus });
        }
        Ok(DiskPoint(z))
    }

    pub fn from_re_im(re: f64, im: f64) -> Result<Self> {
        Self::new(Complex64::new(re, im))
    }

    /// Pulls `z` radially inside [`MAX_RADIUS`] instead of rejecting it.
    pub fn clamped(z: Complex64) -> Self {
        let modulus = z.norm();
        if modulus >= MAX_RADIUS {
            DiskPoint(z * (MAX_RADIUS / modulus))
        } else {
            DiskPoint(z)
        }
    }

    /// Image of the origin under the coset `(phi, tau)`: `tanh(tau/2) e^{i phi}`.
    pub fn from_coset(coset: Coset) -> Self {
        Self::clamped(Complex64::from_polar((0.5 * coset.tau).tanh(), coset.phi))
    }

    /// Inverse of [`DiskPoint::from_coset`]; the angle is 0 at the origin.
    pub fn coset(&self) -> Coset {
        let r = self.0.norm();
        if r == 0.0 {
            return Coset { phi: 0.0, tau: 0.0 };
        }
        Coset {
            phi: reduce_angle(self.0.arg()),
            tau: 2.0 * r.atanh(),
        }
    }

    pub fn z(&self) -> Complex64 {
        self.0
    }

    pub fn modulus(&self) -> f64 {
        self.0.norm()
    }
}

/// Coset coordinates `(phi, tau)` of a disk point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coset {
    pub phi: f64,
    pub tau: f64,
}

impl Coset {
    pub fn new(phi: f64, tau: f64) -> Result<Self> {
        if !(tau >= 0.0) || !tau.is_finite() {
            return Err(Error::invalid("tau", format!("must be finite and >= 0, got {tau}")));
        }
        if !phi.is_finite() {
            return Err(Error::invalid("phi", "must be finite"));
        }
        Ok(Coset {
            phi: reduce_angle(phi),
            tau,
        })
    }
}

/// Cartan coordinates of `g = k(phi) a(tau) k(psi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartanAngles {
    pub phi: f64,
    pub tau: f64,
    pub psi: f64,
}

/// An element of SU(1,1), acting on the disk as `z -> (a z + b) / (conj(b) z + conj(a))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusElement {
    a: Complex64,
    b: Complex64,
}

impl MoebiusElement {
    pub const IDENTITY: MoebiusElement = MoebiusElement {
        a: Complex64 { re: 1.0, im: 0.0 },
        b: Complex64 { re: 0.0, im: 0.0 },
    };

    /// Rejects pairs violating `|a|^2 - |b|^2 = 1` beyond a relative `1e-12`.
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        let det = a.norm_sqr() - b.norm_sqr();
        if !det.is_finite() || (det - 1.0).abs() > UNIMODULAR_TOL * a.norm_sqr().max(1.0) {
            return Err(Error::NotUnimodular { det });
        }
        Ok(MoebiusElement { a, b })
    }

    /// The matrix `g(phi, tau, psi)` of the Cartan decomposition.
    pub fn from_cartan(phi: f64, tau: f64, psi: f64) -> Result<Self> {
        if !(tau >= 0.0) || !tau.is_finite() {
            return Err(Error::invalid("tau", format!("must be finite and >= 0, got {tau}")));
        }
        let (sh, ch) = ((0.5 * tau).sinh(), (0.5 * tau).cosh());
        Ok(MoebiusElement {
            a: Complex64::from_polar(ch, 0.5 * (phi + psi)),
            b: Complex64::from_polar(sh, 0.5 * (phi - psi)),
        })
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn b(&self) -> Complex64 {
        self.b
    }

    pub fn apply(&self, z: DiskPoint) -> DiskPoint {
        let z = z.0;
        DiskPoint::clamped((self.a * z + self.b) / (self.b.conj() * z + self.a.conj()))
    }

    /// Matrix product `self * other`; acts as `self` after `other`.
    pub fn compose(&self, other: &MoebiusElement) -> MoebiusElement {
        MoebiusElement {
            a: self.a * other.a + self.b * other.b.conj(),
            b: self.a * other.b + self.b * other.a.conj(),
        }
    }

    pub fn inverse(&self) -> MoebiusElement {
        MoebiusElement {
            a: self.a.conj(),
            b: -self.b,
        }
    }

    /// Cartan coordinates with angles in `[0, 2pi)`.
    ///
    /// `M` and `-M` give the same coordinates. When `tau < 1e-14` the rotation
    /// is attributed entirely to `phi` and `psi = 0`.
    pub fn decompose(&self) -> CartanAngles {
        let tau = 2.0 * self.b.norm().asinh();
        let sum = self.a.arg();
        if tau < ORIGIN_TAU {
            return CartanAngles {
                phi: reduce_angle(2.0 * sum),
                tau: 0.0,
                psi: 0.0,
            };
        }
        let diff = self.b.arg();
        CartanAngles {
            phi: reduce_angle(sum + diff),
            tau,
            psi: reduce_angle(sum - diff),
        }
    }

    /// Largest entrywise difference to `other`, allowing for the sign ambiguity `M ~ -M`.
    pub fn distance_up_to_sign(&self, other: &MoebiusElement) -> f64 {
        let plus = (self.a - other.a).norm().max((self.b - other.b).norm());
        let minus = (self.a + other.a).norm().max((self.b + other.b).norm());
        plus.min(minus)
    }
}

/// Invariant distance `2 artanh |(z - w) / (1 - conj(z) w)|`.
pub fn hyperbolic_distance(w: DiskPoint, z: DiskPoint) -> f64 {
    let (w, z) = (w.0, z.0);
    let ratio = ((z - w) / (Complex64::new(1.0, 0.0) - z.conj() * w)).norm();
    2.0 * ratio.min(1.0).atanh()
}

/// `cosh` of the hyperbolic angle of `g_l^{-1} g` for `g_l = g(phi_l, tau_l, 0)`, `g = g(phi_0, tau_0, 0)`.
///
/// This is `cosh` of the distance between the two coset points,
/// `cosh tau_l cosh tau_0 - sinh tau_l sinh tau_0 cos(phi_l - phi_0)`.
pub fn relative_cosh(tau_l: f64, phi_l: f64, tau_0: f64, phi_0: f64) -> f64 {
    let (sl, cl) = (tau_l.sinh(), tau_l.cosh());
    let (s0, c0) = (tau_0.sinh(), tau_0.cosh());
    (cl * c0 - sl * s0 * (phi_l - phi_0).cos()).max(1.0)
}
