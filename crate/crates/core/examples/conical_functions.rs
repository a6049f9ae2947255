//! Conical functions on a small table, and the addition formula behind the separated KDE.

use hyperdisk::conical::{addition_series, conical_p, conical_p_grid, QuadratureConfig};
use hyperdisk::hypgeo::relative_cosh;

fn main() -> hyperdisk::Result<()> {
    let cfg = QuadratureConfig::default();
    let kappas = [0.0, 0.5, 1.0, 5.0];
    let taus = [0.0, 0.5, 1.0, 2.0, 4.0];
    for m in [0, 1, 3] {
        println!("m = {m}");
        let table = conical_p_grid(m, &kappas, &taus, &cfg)?;
        for (k, row) in kappas.iter().zip(&table) {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>14.6e}")).collect();
            println!("  kappa {k:>4}: {}", cells.join(" "));
        }
    }

    let (kappa, tau_l, tau_0, theta) = (1.3, 0.8, 1.1, 2.0);
    let direct = conical_p(0, kappa, relative_cosh(tau_l, theta, tau_0, 0.0).acosh(), &cfg)?;
    for m_max in [5, 10, 20, 40] {
        match addition_series(kappa, tau_l, tau_0, theta, m_max, &cfg) {
            Ok(v) => println!("m_max {m_max:>2}: {v:.15} (error {:.1e})", (v - direct).abs()),
            Err(e) => println!("m_max {m_max:>2}: {e}"),
        }
    }
    Ok(())
}
