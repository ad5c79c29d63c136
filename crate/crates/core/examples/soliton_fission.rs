//! An `n(n+1)κ² sech²` hump splitting into `n` solitons.

use solitrend::analytic::{train_predictions, train_profile, TrainSpec};
use solitrend::grid::{sample_profile, Grid1D};
use solitrend::kdv::{fission, Scheme, SolverConfig};

fn main() -> solitrend::Result<()> {
    let n: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let grid = Grid1D::new(160.0, 2048)?;
    let spec = TrainSpec::new(n, 1.0, 30.0, 0.0)?;
    let field = sample_profile(|x| train_profile(&spec, x), grid, 0.0)?;
    let predicted = train_predictions(&spec);
    let cfg = SolverConfig::auto(Scheme::Spectral, &field, 0.0, 1.2 * predicted.amplitudes[n as usize - 1])?;
    let report = fission(&field, &cfg, 2.0, n as usize)?;

    println!("initial height {}", spec.height());
    println!("{:>3} {:>12} {:>12} {:>12} {:>12}", "m", "amplitude", "predicted", "speed", "predicted");
    for (i, s) in report.solitons.iter().enumerate() {
        let m = n as usize - i;
        println!(
            "{m:>3} {:>12.5} {:>12.5} {:>12.5} {:>12.5}",
            s.amplitude,
            predicted.amplitudes[m - 1],
            s.speed,
            predicted.speeds[m - 1]
        );
    }
    Ok(())
}
