//! Oscillator chain: harmonic dispersion and the sech² strain pulse against
//! its continuum KdV evolution.

use solitrend::lattice::{continuum_compare, measure_mode_frequency, ChainConfig};

fn main() -> solitrend::Result<()> {
    let harmonic = ChainConfig::new(1.0, 0.0, 0.0, 1.0, 64, 0.02)?;
    println!("{:>4} {:>10} {:>10}", "m", "measured", "2√k sin");
    for m in [1, 2, 5, 10, 20, 31] {
        println!(
            "{m:>4} {:>10.6} {:>10.6}",
            measure_mode_frequency(&harmonic, m, 20.0)?,
            harmonic.mode_frequency(m)
        );
    }

    let n = 256;
    let strain: Vec<f64> = (0..n)
        .map(|i| 0.1 / ((i as f64 - 128.0) / 8.0).cosh().powi(2))
        .collect();
    for alpha in [0.0, 0.25, 0.5, 1.0] {
        let cfg = ChainConfig::new(1.0, alpha, 0.0, 1.0, n, 0.05)?;
        let cmp = continuum_compare(&strain, &cfg, 100.0)?;
        println!(
            "α = {alpha:<5} correlation {:.5}  τ = {}  T = {:.2}{}",
            cmp.correlation,
            cmp.tau,
            cmp.t_kdv,
            cmp.warning.map(|w| format!("  ({w})")).unwrap_or_default()
        );
    }
    Ok(())
}
