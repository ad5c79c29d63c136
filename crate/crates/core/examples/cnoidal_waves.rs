//! Cnoidal profiles from their cubic roots, and the elliptic functions
//! behind them.

use solitrend::analytic::{cnoidal, complete_elliptic_k, jacobi_elliptic, CnoidalParams};

fn main() -> solitrend::Result<()> {
    for m in [0.0, 0.5, 0.9, 0.999_999] {
        let k = complete_elliptic_k(m)?;
        let j = jacobi_elliptic(0.5 * k, m)?;
        println!(
            "m = {m:<9} K = {k:<10.6} sn(K/2) = {:.6} cn = {:.6} dn = {:.6}",
            j.sn, j.cn, j.dn
        );
    }

    for roots in [(-1.0, 0.0, 2.0), (-0.2, 0.0, 2.0), (-1e-6, 0.0, 2.0)] {
        let p = CnoidalParams::from_roots(roots.0, roots.1, roots.2)?;
        println!(
            "\nroots {:?}: m = {:.6}, period {:.4}, δ = {:.4}",
            p.roots,
            p.m,
            p.period(),
            p.delta()
        );
        let steps = 16;
        for i in 0..=steps {
            let x = p.period() * i as f64 / steps as f64;
            let u = cnoidal(&p, 0.0, x, 0.0);
            let bar = "#".repeat(((u - p.roots[1]) * 20.0).round().max(0.0) as usize);
            println!("{x:>8.3} {u:>9.5} {bar}");
        }
    }
    Ok(())
}
