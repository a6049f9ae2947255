use std::path::PathBuf;

/// Errors produced by the geometry, transform, density and pipeline code.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("not an SU(1,1) element: |a|^2 - |b|^2 = {det} (expected 1)")]
    NotUnimodular { det: f64 },

    #[error("point with modulus {modulus} is not inside the open unit disk")]
    OutsideDisk { modulus: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error(
        "conical quadrature failed for m={m}, kappa={kappa}, tau={tau}: \
         imaginary residue {imag:e} exceeds tolerance"
    )]
    Quadrature { m: i32, kappa: f64, tau: f64, imag: f64 },

    #[error("quadrature failed at grid entry ({row}, {col}): {source}")]
    GridQuadrature {
        row: usize,
        col: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("addition series did not converge: last term magnitude {last_term:e}")]
    NotConverged { last_term: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("density has zero or non-finite mass ({mass})")]
    ZeroMass { mass: f64 },

    #[error("classical MDS: only {found} nonnegative eigenvalues, {requested} requested")]
    InsufficientEigenvalues { found: usize, requested: usize },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for failures of the numerical quadrature (as opposed to bad input).
    pub fn is_quadrature_failure(&self) -> bool {
        matches!(
            self,
            Error::Quadrature { .. } | Error::GridQuadrature { .. } | Error::NotConverged { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
