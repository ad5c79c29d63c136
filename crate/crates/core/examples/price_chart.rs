//! SVG price chart with soliton-m² levels, written to `target/chart.svg`.

use solitrend::market::{soliton_projection, synthetic_series, SolitonAnchor, SyntheticPulse, Trend};
use solitrend::report::{emit_svg, Chart, Overlay};

fn main() -> solitrend::Result<()> {
    let pulse = [SyntheticPulse { amplitude: 40.0, kappa: 0.15, center: 40.0 }];
    let y = synthetic_series(160, &pulse, 0.0, Trend { intercept: 100.0, slope: 0.0 }, 0.5, 3);
    let x: Vec<f64> = (0..y.len()).map(|i| i as f64).collect();
    let anchor = SolitonAnchor {
        base: 100.0,
        a1: 40.0,
        t0: 20.0,
        t1: 20.0,
    };
    let overlay = Overlay::from_report(&soliton_projection(&anchor, 3)?);
    let chart = Chart {
        title: "synthetic close",
        x_label: "bar",
        y_label: "price",
        x: &x,
        y: &y,
    };
    let (svg, scale) = emit_svg(&chart, Some(&overlay))?;
    std::fs::write("target/chart.svg", &svg).ok();
    println!(
        "{} bytes, y range {:.1}..{:.1}, {} levels",
        svg.len(),
        scale.y_min,
        scale.y_max,
        overlay.levels.len()
    );
    Ok(())
}
