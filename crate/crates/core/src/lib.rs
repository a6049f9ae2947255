//! Harmonic analysis on the hyperbolic disk.
//!
//! - [`hypgeo`]: SU(1,1) elements, Cartan coordinates, disk points and distances.
//! - [`conical`]: conical functions `P^m_{-1/2+i kappa}(cosh tau)` and their addition formula.
//! - [`mft`]: Mehler-Fock transform, Parseval products and heat flow.
//! - [`density`]: invariant kernel density estimates, direct and separated.
//! - [`pipelines`]: texture ordering and color desaturation.
//! - [`cli`]: the `hyperdisk` command line.

pub mod cli;
pub mod conical;
pub mod density;
pub mod error;
pub mod hypgeo;
pub mod io;
pub mod mft;
pub mod pipelines;

pub use conical::{addition_series, conical_p, conical_p_grid, ConicalOrder, QuadratureConfig};
pub use density::{kde_direct, kde_spectral, DiskDensity, Grids, RadialKernel, SampleSet};
pub use error::{Error, Result};
pub use hypgeo::{hyperbolic_distance, relative_cosh, Coset, DiskPoint, MoebiusElement};
pub use mft::{
    heat_multiplier, mft_forward, mft_inverse, parseval_distance, parseval_inner, MehlerFock, MftConfig,
    RadialFunction, RadialGrid, SpectralGrid, Spectrum,
};
