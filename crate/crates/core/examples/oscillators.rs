//! Entropic oscillator pairs: conserved functions, periods, and the
//! constants recovered from a non-harmonic trajectory.

use solitrend::oscillator::{
    entropy_split, integrate_harmonic, integrate_nonharmonic, osc_params, participant_probabilities,
    recover_nonharmonic_constants, MarketCounts, ProbState2, ReferenceState,
};

fn main() -> solitrend::Result<()> {
    let p = participant_probabilities(MarketCounts { bulls: 620, bears: 380 })?;
    let split = entropy_split(p.p_plus, p.p_minus, p.p)?;
    println!("p+ = {}, p- = {}, P = {}", p.p_plus, p.p_minus, p.p);
    println!("informative {:.6} nats, redundant {:.6} nats", split.informative, split.redundant);

    let r = ReferenceState::new(0.4, 0.3, 0.1)?;
    let params = osc_params(&r);
    println!("\nreference {r:?}");
    println!("ω = {:.6}, α = {}, C1 = {}", params.chi.sqrt(), params.alpha, params.c1);

    let init = ProbState2::new(0.4, 0.35)?;
    let h = integrate_harmonic(&r, init, 0.05, 2000.0)?;
    println!(
        "harmonic: period {:.5} (2π/ω = {:.5}), D* drift {:.2e}",
        h.mean_period().unwrap_or(f64::NAN),
        std::f64::consts::TAU / params.chi.sqrt(),
        h.invariant_drift()
    );
    let nh = integrate_nonharmonic(&r, init, 0.05, 2000.0)?;
    println!(
        "non-harmonic: period {:.5}, D** drift {:.2e}",
        nh.mean_period().unwrap_or(f64::NAN),
        nh.invariant_drift()
    );
    let c = recover_nonharmonic_constants(&nh)?;
    println!("recovered k = {:.6}, α = {:.6}, C1 = {:.6}", c.k, c.alpha, c.c1);

    let far = ProbState2::new(0.4, 0.95)?;
    match integrate_nonharmonic(&r, far, 0.05, 100.0) {
        Ok(_) => println!("large excursion stayed bounded"),
        Err(e) => println!("large excursion: {e}"),
    }
    Ok(())
}
