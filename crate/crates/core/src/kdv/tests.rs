use super::*;
use crate::analytic::{forced_soliton, soliton, train_profile, SolitonParam, TrainSpec};
use crate::grid::{sample_profile, Grid1D};

fn reference_soliton(kappa: f64) -> (WaveField, SolitonParam) {
    let grid = Grid1D::new(40.0, 512).unwrap();
    let p = SolitonParam::new(kappa, 10.0, 0.0).unwrap();
    (sample_profile(|x| soliton(&p, x, 0.0), grid, 0.0).unwrap(), p)
}

#[test]
fn zero_field_stays_zero() {
    let grid = Grid1D::new(40.0, 64).unwrap();
    let field = WaveField::zeros(grid, 0.0);
    for scheme in [Scheme::ZabuskyKruskal, Scheme::Spectral] {
        let cfg = SolverConfig::auto(scheme, &field, 0.0, 1.0).unwrap();
        let out = evolve(&field, &cfg, 0.2).unwrap();
        assert!(out.samples().iter().all(|&v| v == 0.0));
    }
}

#[test]
fn uniform_sink() {
    let grid = Grid1D::new(40.0, 64).unwrap();
    let field = WaveField::zeros(grid, 0.0);
    for scheme in [Scheme::ZabuskyKruskal, Scheme::Spectral] {
        let cfg = SolverConfig::auto(scheme, &field, 0.5, 1.0).unwrap();
        let out = evolve(&field, &cfg, 2.0).unwrap();
        assert!((out.time() - 2.0).abs() < 1e-12);
        for v in out.samples() {
            assert!((v + 1.0).abs() < 1e-9, "{scheme:?}: {v}");
        }
    }
}

#[test]
fn rejects_unstable_zk_step() {
    let (field, _) = reference_soliton(1.0);
    let bound = zk_step_bound(field.grid().dx(), 2.0);
    let cfg = SolverConfig::new(Scheme::ZabuskyKruskal, 2.0 * bound, 0.0).unwrap();
    assert!(matches!(evolve(&field, &cfg, 0.1), Err(SolverError::Unstable { .. })));
    assert!(SolverConfig::new(Scheme::Spectral, 0.0, 0.0).is_err());
    assert!(SolverConfig::new(Scheme::Spectral, 1e-3, -1.0).is_err());
}

#[test]
fn step_budget() {
    let (field, _) = reference_soliton(1.0);
    let cfg = SolverConfig::new(Scheme::Spectral, 1e-3, 0.0)
        .unwrap()
        .with_max_steps(10);
    let err = evolve(&field, &cfg, 1.0).unwrap_err();
    assert_eq!(err, SolverError::TooManySteps { needed: 1000, max: 10 });
    assert!(err.is_numerical());
}

#[test]
fn blow_up_detected() {
    let grid = Grid1D::new(10.0, 32).unwrap();
    let field = sample_profile(|x| 50.0 * (2.0 * std::f64::consts::PI * x / 10.0).sin(), grid, 0.0)
        .unwrap();
    let cfg = SolverConfig::new(Scheme::Spectral, 0.05, 0.0).unwrap();
    let err = evolve(&field, &cfg, 50.0).unwrap_err();
    assert!(matches!(err, SolverError::BlowUp { .. }), "{err:?}");
}

#[test]
fn soliton_travels_both_schemes() {
    let (field, p) = reference_soliton(1.0);
    for scheme in [Scheme::ZabuskyKruskal, Scheme::Spectral] {
        let cfg = SolverConfig::auto(scheme, &field, 0.0, 2.0).unwrap();
        let out = evolve(&field, &cfg, 1.0).unwrap();
        let peak = out.global_peak();
        let moved = field.grid().displacement(p.center, peak.position);
        assert!((moved - 4.0).abs() < 0.04, "{scheme:?}: moved {moved}");
        assert!((peak.height - 2.0).abs() < 0.02, "{scheme:?}: height {}", peak.height);
    }
}

#[test]
fn spectral_matches_closed_form() {
    let (field, p) = reference_soliton(1.0);
    let cfg = SolverConfig::auto(Scheme::Spectral, &field, 0.0, 2.0).unwrap();
    let out = evolve(&field, &cfg, 1.0).unwrap();
    let exact = sample_profile(|x| soliton(&p, x, 1.0), *field.grid(), 1.0).unwrap();
    let err = out
        .samples()
        .iter()
        .zip(exact.samples())
        .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
    assert!(err < 1e-4, "max error {err}");
}

#[test]
fn forced_soliton_tracked_by_spectral() {
    let grid = Grid1D::new(40.0, 512).unwrap();
    let p = SolitonParam::new(1.0, 20.0, 0.5).unwrap();
    let field = sample_profile(|x| forced_soliton(&p, x, 0.0), grid, 0.0).unwrap();
    let cfg = SolverConfig::auto(Scheme::Spectral, &field, 0.5, 3.0).unwrap();
    let out = evolve(&field, &cfg, 1.0).unwrap();
    let exact = sample_profile(|x| forced_soliton(&p, x, 1.0), grid, 1.0).unwrap();
    let err = out
        .samples()
        .iter()
        .zip(exact.samples())
        .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
    assert!(err < 1e-4, "max error {err}");
}

#[test]
fn soliton_invariants() {
    let (field, _) = reference_soliton(1.0);
    let inv = invariants(&field);
    assert!((inv.i1 - 4.0).abs() < 1e-3);
    assert!((inv.i2 - 16.0 / 3.0).abs() < 1e-2);
    // ∫ 2u³ − u_x² = 256κ⁵/15 − 64κ⁵/15 for the 2κ² sech² profile
    assert!((inv.i3 - 192.0 / 15.0).abs() < 1e-3, "{}", inv.i3);
    let zero = invariants(&WaveField::zeros(*field.grid(), 0.0));
    assert_eq!((zero.i1, zero.i2, zero.i3), (0.0, 0.0, 0.0));
}

#[test]
fn spectral_derivative_of_sine() {
    let grid = Grid1D::new(10.0, 64).unwrap();
    let w = 2.0 * std::f64::consts::PI / 10.0;
    let f = sample_profile(|x| (3.0 * w * x).sin(), grid, 0.0).unwrap();
    let d = spectral_derivative(f.samples(), 10.0);
    for (x, v) in grid.points().zip(d) {
        assert!((v - 3.0 * w * (3.0 * w * x).cos()).abs() < 1e-12);
    }
}

#[test]
fn observed_run_logs() {
    let (field, _) = reference_soliton(1.0);
    let cfg = SolverConfig::new(Scheme::Spectral, 0.01, 0.0).unwrap();
    let obs = Observation {
        invariants_every: 10,
        snapshot_every: 25,
    };
    let run = evolve_observed(&field, &cfg, 1.0, obs).unwrap();
    assert_eq!(run.steps, 100);
    assert_eq!(run.invariants.len(), 11);
    assert_eq!(run.snapshots.len(), 5);
    let csv = run.invariants_csv();
    assert!(csv.starts_with("t,I1,I2,I3\n"));
    assert_eq!(csv.lines().count(), 12);
}

#[test]
fn single_train_member_does_not_split() {
    let grid = Grid1D::new(40.0, 512).unwrap();
    let spec = TrainSpec::new(1, 1.0, 10.0, 0.0).unwrap();
    let field = sample_profile(|x| train_profile(&spec, x), grid, 0.0).unwrap();
    let cfg = SolverConfig::auto(Scheme::Spectral, &field, 0.0, 2.0).unwrap();
    let report = fission(&field, &cfg, 2.0, 1).unwrap();
    let s = report.solitons[0];
    assert!((s.amplitude - 2.0).abs() < 0.02);
    assert!((s.speed - 4.0).abs() < 0.04);
}

#[test]
fn fission_reports_missing_solitons() {
    let grid = Grid1D::new(40.0, 256).unwrap();
    let spec = TrainSpec::new(1, 1.0, 10.0, 0.0).unwrap();
    let field = sample_profile(|x| train_profile(&spec, x), grid, 0.0).unwrap();
    let cfg = SolverConfig::auto(Scheme::Spectral, &field, 0.0, 2.0).unwrap();
    let err = fission(&field, &cfg, 2.0, 3).unwrap_err();
    assert_eq!(err, SolverError::TooFewSolitons { expected: 3, found: 1 });
}

#[test]
fn market_form_round_trip() {
    let delta = 4.0;
    let scaling = MarketScaling::new(delta).unwrap();
    let grid_n6 = Grid1D::new(40.0, 512).unwrap();
    let p = SolitonParam::new(1.0, 10.0, 0.0).unwrap();
    let n6 = sample_profile(|x| soliton(&p, x, 0.0), grid_n6, 0.0).unwrap();
    let market = scaling.field_from_n6(&n6).unwrap();
    let cfg_market = SolverConfig::new(Scheme::Spectral, scaling.time_from_n6(1e-3), 0.0).unwrap();
    let out = evolve_market(&market, delta, &cfg_market, scaling.time_from_n6(0.5)).unwrap();
    let back = scaling.field_to_n6(&out).unwrap();
    let exact = sample_profile(|x| soliton(&p, x, 0.5), grid_n6, 0.5).unwrap();
    let err = back
        .samples()
        .iter()
        .zip(exact.samples())
        .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
    assert!(err < 1e-4, "{err}");
}
