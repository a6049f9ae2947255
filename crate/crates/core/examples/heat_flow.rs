//! Heat flow of a zonal density: the peak drops, the mass stays.

use hyperdisk::density::{Grids, RadialKernel};
use hyperdisk::mft::heat_multiplier;

fn main() -> hyperdisk::Result<()> {
    let grids = Grids::default();
    let mf = grids.transform()?;
    let f = RadialKernel::power_cosh(6.0)?.radial(grids.radial)?;
    let c = mf.forward(&f)?;
    for t in [0.0, 0.05, 0.1, 0.2, 0.5, 1.0] {
        let g = mf.inverse(&heat_multiplier(&c, t)?)?;
        println!("t = {t:<4}: sup {:.6}, mass {:.6}", g.max_abs(), g.mass());
    }
    Ok(())
}
