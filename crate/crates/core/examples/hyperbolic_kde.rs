//! Density estimate of a few disk points, direct and separated.
//!
//! `cargo run --release --example hyperbolic_kde [out_dir]` also writes the
//! coefficients and a contour dump.

use std::f64::consts::TAU;
use std::path::PathBuf;

use hyperdisk::density::{kde_direct, kde_spectral, Grids, RadialKernel, SampleSet};
use hyperdisk::hypgeo::{Coset, DiskPoint};
use hyperdisk::io;

fn main() -> hyperdisk::Result<()> {
    let points = [(0.0, 0.2), (1.0, 0.9), (2.5, 1.4), (4.0, 0.6), (5.5, 1.8)]
        .iter()
        .map(|&(phi, tau)| Coset::new(phi, tau))
        .collect::<hyperdisk::Result<Vec<_>>>()?;
    let samples = SampleSet::new(points, None)?;
    let kernel = RadialKernel::power_cosh(4.0)?;
    let grids = Grids::default();
    let density = kde_spectral(&samples, &kernel, 32, &grids)?;
    println!("mass {:.6}", density.mass()?);

    for (phi, tau) in [(0.0, 0.0), (1.0, 0.9), (3.0, 1.0), (5.5, 2.5)] {
        let q = DiskPoint::from_coset(Coset::new(phi, tau)?);
        println!(
            "phi {phi:.1} tau {tau:.1}: direct {:.6}, separated {:.6}",
            kde_direct(&samples, &kernel, q),
            density.evaluate(q)?
        );
    }

    if let Some(dir) = std::env::args().nth(1).map(PathBuf::from) {
        let phis: Vec<f64> = (0..72).map(|i| TAU * i as f64 / 72.0).collect();
        let taus: Vec<f64> = (0..61).map(|j| 0.05 * j as f64).collect();
        io::write_density(&dir.join("density.csv"), &density)?;
        io::write_contour(&dir.join("density_contour.csv"), &density.evaluate_polar(&phis, &taus)?)?;
        println!("wrote {}", dir.display());
    }
    Ok(())
}
