//! SU(1,1) elements acting on the disk: Cartan coordinates, cosets and distances.

use std::f64::consts::PI;

use hyperdisk::hypgeo::{hyperbolic_distance, relative_cosh, Coset, DiskPoint, MoebiusElement};

fn main() -> hyperdisk::Result<()> {
    let g = MoebiusElement::from_cartan(0.3, 1.2, -0.7)?;
    let c = g.decompose();
    println!("g = k({:.3}) a({:.3}) k({:.3})", c.phi, c.tau, c.psi);

    let w = DiskPoint::from_coset(Coset::new(0.0, 0.5)?);
    let z = DiskPoint::from_coset(Coset::new(PI / 2.0, 1.5)?);
    let (gw, gz) = (g.apply(w), g.apply(z));
    println!("d(w, z)   = {:.12}", hyperbolic_distance(w, z));
    println!("d(gw, gz) = {:.12}", hyperbolic_distance(gw, gz));

    // cosh of the distance from the coset coordinates alone
    let rc = relative_cosh(0.5, 0.0, 1.5, PI / 2.0);
    println!("cosh d    = {:.12} (relative_cosh {:.12})", hyperbolic_distance(w, z).cosh(), rc);

    let h = MoebiusElement::from_cartan(1.0, 0.4, 2.0)?;
    let lhs = g.compose(&h).apply(z);
    let rhs = g.apply(h.apply(z));
    println!("|(gh)z - g(hz)| = {:.1e}", (lhs.z() - rhs.z()).norm());
    Ok(())
}
