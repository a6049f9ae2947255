//! Forward and inverse Mehler-Fock transform of the kernel family, with Parseval.

use hyperdisk::density::Grids;
use hyperdisk::mft::{parseval_inner, RadialFunction};

fn main() -> hyperdisk::Result<()> {
    let grids = Grids::default();
    let mf = grids.transform()?;
    for s in [2.0, 3.0, 4.0] {
        let f = RadialFunction::from_fn(grids.radial, |t: f64| t.cosh().powf(-s))?;
        let c = mf.forward(&f)?;
        let back = mf.inverse(&c)?;
        // Int_1^oo x^{-2s} dx
        let exact = 1.0 / (2.0 * s - 1.0);
        println!(
            "s = {s}: round-trip L2 error {:.2e}, <c, c> = {:.10} (exact {exact:.10})",
            back.relative_l2_error(&f)?,
            parseval_inner(&c, &c)?
        );
    }
    Ok(())
}
