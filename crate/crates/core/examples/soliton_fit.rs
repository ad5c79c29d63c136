//! Fits a two-pulse template to a noisy synthetic series and prints the
//! m² scorecard.

use solitrend::market::{
    fit_soliton_train, ratio_scorecard, synthetic_series, FitOptions, SyntheticPulse, Trend,
};

fn main() -> solitrend::Result<()> {
    let truth = [
        SyntheticPulse { amplitude: 3.0, kappa: 0.07, center: 110.0 },
        SyntheticPulse { amplitude: 12.0, kappa: 0.14, center: 300.0 },
    ];
    let y = synthetic_series(480, &truth, 0.0, Trend { intercept: 250.0, slope: 0.03 }, 0.12, 42);
    let fit = fit_soliton_train(&y, 2, &FitOptions { seed: 7, ..FitOptions::default() })?;
    println!(
        "{:?} after {} iterations (start {}), residual rms {:.4}",
        fit.status, fit.iterations, fit.best_start, fit.residual_rms
    );
    for (p, t) in fit.pulses.iter().zip(&truth) {
        println!(
            "  A {:>8.4} ({:>5})  κ {:>8.5} ({:>5})  center {:>8.3} ({:>5})",
            p.amplitude, t.amplitude, p.kappa, t.kappa, p.center, t.center
        );
    }
    let card = ratio_scorecard(&fit, 0.0)?;
    print!("\n{}", card.to_text());
    Ok(())
}
