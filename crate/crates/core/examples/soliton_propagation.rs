//! Evolves a single soliton with both schemes and compares against the
//! closed form.
//!
//! ```text
//! cargo run --example soliton_propagation -- 1.5
//! ```

use solitrend::analytic::{soliton, SolitonParam};
use solitrend::grid::{sample_profile, Grid1D};
use solitrend::kdv::{evolve, Scheme, SolverConfig};

fn main() -> solitrend::Result<()> {
    let kappa: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1.0);
    let grid = Grid1D::new(40.0, 512)?;
    let p = SolitonParam::new(kappa, 10.0, 0.0)?;
    let field = sample_profile(|x| soliton(&p, x, 0.0), grid, 0.0)?;
    let t = 1.0 / (kappa * kappa);
    let exact = sample_profile(|x| soliton(&p, x, t), grid, t)?;

    println!("κ = {kappa}: amplitude {}, speed {}", p.amplitude(), p.speed());
    for scheme in [Scheme::Spectral, Scheme::ZabuskyKruskal] {
        let cfg = SolverConfig::auto(scheme, &field, 0.0, 2.0 * p.amplitude())?;
        let out = evolve(&field, &cfg, t)?;
        let peak = out.global_peak();
        let err = out
            .samples()
            .iter()
            .zip(exact.samples())
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        println!(
            "{:>20}: dt {:.2e}, peak {:.6} at x = {:.4} (moved {:.4}), max error {err:.2e}",
            scheme.name(),
            cfg.dt,
            peak.height,
            peak.position,
            grid.displacement(p.center, peak.position),
        );
    }
    Ok(())
}
