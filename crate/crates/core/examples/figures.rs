//! Regenerates the synthetic soliton charts as CSV and SVG under
//! `target/figures/`.

use solitrend::analytic::figures::all_figures;
use solitrend::report::{emit_svg, Chart};

fn main() -> solitrend::Result<()> {
    let dir = std::path::Path::new("target/figures");
    std::fs::create_dir_all(dir).map_err(|e| solitrend::Error::Io {
        path: dir.display().to_string(),
        source: e,
    })?;
    for fig in all_figures()? {
        let x: Vec<f64> = fig.field.grid().points().collect();
        let chart = Chart {
            title: &fig.title,
            x_label: "x",
            y_label: "u",
            x: &x,
            y: fig.field.samples(),
        };
        let (svg, _) = emit_svg(&chart, None)?;
        let path = dir.join(format!("fig{}.svg", fig.number));
        std::fs::write(&path, svg).ok();
        std::fs::write(dir.join(format!("fig{}.csv", fig.number)), fig.field.to_csv()).ok();
        println!("figure {} ({}): crests {:?}", fig.number, fig.title, fig.crest_heights());
        for p in &fig.pulses {
            println!("    {:<22} A = {:<8} at x = {:.3}", p.label, p.amplitude, p.position);
        }
    }
    println!("wrote {}", dir.display());
    Ok(())
}
