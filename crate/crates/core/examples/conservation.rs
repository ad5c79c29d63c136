//! Invariant logs for unforced and forced runs.

use solitrend::analytic::{forced_soliton, soliton, SolitonParam};
use solitrend::grid::{sample_profile, Grid1D};
use solitrend::kdv::{evolve_observed, Observation, Scheme, SolverConfig};

fn main() -> solitrend::Result<()> {
    let grid = Grid1D::new(40.0, 512)?;
    let obs = Observation {
        invariants_every: 20_000,
        snapshot_every: 0,
    };
    let p = SolitonParam::new(1.0, 10.0, 0.0)?;
    let field = sample_profile(|x| soliton(&p, x, 0.0), grid, 0.0)?;
    for scheme in [Scheme::ZabuskyKruskal, Scheme::Spectral] {
        let cfg = SolverConfig::auto(scheme, &field, 0.0, 2.0)?;
        let run = evolve_observed(&field, &cfg, 10.0, obs)?;
        println!("{} ({} steps)", scheme.name(), run.steps);
        print!("{}", run.invariants_csv());
    }

    let c = 0.5;
    let p = SolitonParam::new(1.0, 20.0, c)?;
    let field = sample_profile(|x| forced_soliton(&p, x, 0.0), grid, 0.0)?;
    let cfg = SolverConfig::auto(Scheme::Spectral, &field, c, 3.0)?;
    let run = evolve_observed(&field, &cfg, 2.0, Observation { invariants_every: 500, snapshot_every: 0 })?;
    println!("forced, C = {c}: I1 should fall at rate C·L = {}", c * grid.length());
    for w in run.invariants.windows(2) {
        let (t0, a) = w[0];
        let (t1, b) = w[1];
        println!("t = {t1:.3}  dI1/dt = {:.9}", (b.i1 - a.i1) / (t1 - t0));
    }
    Ok(())
}
