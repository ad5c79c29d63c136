//! A forced soliton drifts forward, stalls, and comes back to its launch
//! point. Compares the measured return time with `4κ²/(3C)` and `8κ³/C`.

use solitrend::grid::Grid1D;
use solitrend::kdv::{forced_return, Scheme, SolverConfig};

fn main() -> solitrend::Result<()> {
    let forcing = 1.0;
    let grid = Grid1D::new(40.0, 512)?;
    println!("{:>4} {:>10} {:>10} {:>10} {:>10}", "κ", "measured", "4κ²/3C", "8κ³/C", "excursion");
    let mut first = None;
    for kappa in [0.75, 1.0, 1.5, 2.0] {
        let dt = 0.25 * grid.dx() / (6.0 * (2.0 * kappa * kappa + 2.0 * kappa * kappa / forcing));
        let cfg = SolverConfig::new(Scheme::Spectral, dt, forcing)?;
        let r = forced_return(grid, kappa, &cfg)?;
        println!(
            "{kappa:>4} {:>10.5} {:>10.5} {:>10.5} {:>10.4}",
            r.measured, r.model, r.printed, r.max_excursion
        );
        if kappa == 1.0 {
            first = Some(r.measured);
        } else if let (2.0, Some(t1)) = (kappa, first) {
            println!("T(κ=2)/T(κ=1) = {:.4}", r.measured / t1);
        }
    }
    Ok(())
}
