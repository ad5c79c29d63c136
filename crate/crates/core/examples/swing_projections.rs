//! Zigzag swings on an OHLC file and the ratio projections off its largest
//! swing.
//!
//! ```text
//! cargo run --example swing_projections -- prices.csv 0.05
//! ```
//!
//! Without a file a synthetic series is used.

use solitrend::market::{
    alternate_price_projection, detect_pivots, Direction, expansion_levels, load_ohlc_path, parse_timestamp,
    retracement_levels, soliton_projection, swings, synthetic_series, PriceSeries, SolitonAnchor,
    SyntheticPulse, Trend,
};

fn main() -> solitrend::Result<()> {
    let mut args = std::env::args().skip(1);
    let series = match args.next() {
        Some(path) => load_ohlc_path(path.as_ref())?,
        None => {
            let pulses = [
                SyntheticPulse { amplitude: 8.0, kappa: 0.1, center: 50.0 },
                SyntheticPulse { amplitude: 32.0, kappa: 0.2, center: 130.0 },
            ];
            let closes = synthetic_series(200, &pulses, 0.0, Trend { intercept: 100.0, slope: 0.1 }, 0.3, 1);
            PriceSeries::from_closes(&closes, parse_timestamp("2023-01-02").unwrap(), 86_400)
        }
    };
    let threshold = args.next().and_then(|s| s.parse().ok()).unwrap_or(0.05);

    let pivots = detect_pivots(&series, threshold)?;
    let sw = swings(&series, &pivots);
    for s in &sw {
        println!(
            "{:?} {:>8.2} → {:>8.2} over {:>4} bars",
            s.direction, s.start.price, s.end.price, s.bars
        );
    }
    let Some(last) = sw.iter().max_by(|a, b| a.price_range.total_cmp(&b.price_range)) else {
        println!("no swings at threshold {threshold}");
        return Ok(());
    };
    let first_up = sw.iter().find(|s| s.direction == Direction::Up).unwrap_or(last);
    println!("\nprojecting off the {:.2}-point swing ending at bar {}", last.price_range, last.end.index);
    for report in [
        retracement_levels(last),
        expansion_levels(last),
        alternate_price_projection(last, last.end.price, last.end.index)?,
        soliton_projection(&SolitonAnchor::from_swing(first_up), 4)?,
    ] {
        let report = report.with_calendar(&series);
        println!("\n{}", report.method.name());
        for l in &report.levels {
            println!("  {:>8} {:>10.3}", l.label, l.value);
        }
        for w in &report.warnings {
            println!("  warning: {w}");
        }
    }
    Ok(())
}
