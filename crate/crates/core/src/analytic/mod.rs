//! Closed-form solutions of the market equation.
//!
//! Everything here uses the normalization `u_t + 6 u u_x + u_xxx + C = 0`,
//! under which `2κ² sech²(κx − 4κ³t)` is an exact soliton. [`MarketScaling`]
//! maps these solutions onto `P_T + P P_X + δ P_XXX + C = 0`.

mod cnoidal;
mod elliptic;
pub mod figures;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{Grid1D, GridError, WaveField};

pub use cnoidal::{cnoidal, CnoidalParams, DEFAULT_BOOST};
pub use elliptic::{complete_elliptic_k, jacobi_elliptic, JacobiValues};

#[derive(Debug, Error, PartialEq)]
pub enum AnalyticError {
    #[error("κ must be finite and positive, got {0}")]
    BadKappa(f64),
    #[error("forcing must be finite and non-negative, got {0}")]
    BadForcing(f64),
    #[error("a soliton train needs n ≥ 1")]
    EmptyTrain,
    #[error("an unforced soliton never returns to its origin")]
    NoReturn,
    #[error("elliptic parameter m = {0} outside [0, 1]")]
    BadModulus(f64),
    #[error("cubic has complex roots (discriminant {discriminant}); no periodic regime")]
    ComplexRoots { discriminant: f64 },
    #[error("amplitudes must be positive, got {0} and {1}")]
    BadAmplitude(f64, f64),
    #[error("δ must be finite and positive, got {0}")]
    BadDelta(f64),
    #[error("no trains to superpose")]
    NothingToSuperpose,
    #[error("unknown figure {0}; expected 2, 3, 4 or 5")]
    UnknownFigure(u8),
    #[error(transparent)]
    Grid(#[from] GridError),
}

pub(crate) fn sech2(x: f64) -> f64 {
    // cosh overflows past ~710; sech² is zero to double precision well before
    if x.abs() > 350.0 {
        return 0.0;
    }
    let c = x.cosh();
    1.0 / (c * c)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolitonParam {
    pub kappa: f64,
    pub center: f64,
    pub forcing: f64,
}

impl SolitonParam {
    pub fn new(kappa: f64, center: f64, forcing: f64) -> Result<Self, AnalyticError> {
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(AnalyticError::BadKappa(kappa));
        }
        if !(forcing.is_finite() && forcing >= 0.0) {
            return Err(AnalyticError::BadForcing(forcing));
        }
        Ok(Self {
            kappa,
            center,
            forcing,
        })
    }

    pub fn amplitude(&self) -> f64 {
        2.0 * self.kappa * self.kappa
    }

    pub fn speed(&self) -> f64 {
        4.0 * self.kappa * self.kappa
    }

    /// Peak displacement from `center` at time `t`: `4κ²t − 3Ct²`.
    pub fn peak_offset(&self, t: f64) -> f64 {
        self.speed() * t - 3.0 * self.forcing * t * t
    }
}

/// `2κ² sech²(κ(x − x0) − 4κ³t)`. Forcing in `p` is ignored.
pub fn soliton(p: &SolitonParam, x: f64, t: f64) -> f64 {
    let k = p.kappa;
    2.0 * k * k * sech2(k * (x - p.center) - 4.0 * k * k * k * t)
}

/// `2κ² sech²(κ(x − x0) − 4κ³t + 3Cκt²) − Ct`: the soliton carried by a
/// background that sinks at rate `C`, boosted so the forced residual vanishes.
pub fn forced_soliton(p: &SolitonParam, x: f64, t: f64) -> f64 {
    let k = p.kappa;
    let c = p.forcing;
    let phase = k * (x - p.center) - 4.0 * k * k * k * t + 3.0 * c * k * t * t;
    2.0 * k * k * sech2(phase) - c * t
}

/// Return time of the forced soliton's peak to its starting position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReturnTime {
    /// Positive root of `4κ²T − 3CT² = 0`.
    pub model: f64,
    /// The printed `8κ³/C` rule, reported for comparison only.
    pub printed: f64,
}

pub fn return_time(p: &SolitonParam) -> Result<ReturnTime, AnalyticError> {
    if p.forcing <= 0.0 {
        return Err(AnalyticError::NoReturn);
    }
    let k2 = p.kappa * p.kappa;
    Ok(ReturnTime {
        model: 4.0 * k2 / (3.0 * p.forcing),
        printed: 8.0 * k2 * p.kappa / p.forcing,
    })
}

/// Initial perturbation `n(n+1)κ² sech²(κ(x − x0))` and its forcing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainSpec {
    pub n: u32,
    pub kappa: f64,
    pub center: f64,
    pub forcing: f64,
}

impl TrainSpec {
    pub fn new(n: u32, kappa: f64, center: f64, forcing: f64) -> Result<Self, AnalyticError> {
        if n == 0 {
            return Err(AnalyticError::EmptyTrain);
        }
        SolitonParam::new(kappa, center, forcing)?;
        Ok(Self {
            n,
            kappa,
            center,
            forcing,
        })
    }

    pub fn height(&self) -> f64 {
        let n = self.n as f64;
        n * (n + 1.0) * self.kappa * self.kappa
    }

    /// The `m`-th emitted soliton (`m = 1..=n`), with `κ_m = mκ`.
    pub fn member(&self, m: u32) -> SolitonParam {
        SolitonParam {
            kappa: m as f64 * self.kappa,
            center: self.center,
            forcing: self.forcing,
        }
    }
}

pub fn train_profile(spec: &TrainSpec, x: f64) -> f64 {
    spec.height() * sech2(spec.kappa * (x - spec.center))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainPredictions {
    pub amplitudes: Vec<f64>,
    pub speeds: Vec<f64>,
    pub arrival_ratios: Vec<f64>,
}

pub fn train_predictions(spec: &TrainSpec) -> TrainPredictions {
    let k2 = spec.kappa * spec.kappa;
    let ms = || (1..=spec.n).map(|m| (m * m) as f64);
    TrainPredictions {
        amplitudes: ms().map(|m2| 2.0 * m2 * k2).collect(),
        speeds: ms().map(|m2| 4.0 * m2 * k2).collect(),
        arrival_ratios: ms().collect(),
    }
}

/// A train placed on the time axis with its own offset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OffsetTrain {
    pub spec: TrainSpec,
    pub time_offset: f64,
}

/// Forced train already resolved into its members: every member rides the
/// same background, so the drift `−C(t − offset)` is counted once per train.
pub fn train_value(train: &OffsetTrain, x: f64, t: f64) -> f64 {
    let tau = t - train.time_offset;
    let spec = train.spec;
    let pulses: f64 = (1..=spec.n)
        .map(|m| {
            let member = spec.member(m);
            forced_soliton(&member, x, tau) + member.forcing * tau
        })
        .sum();
    pulses - spec.forcing * tau
}

/// Pointwise sum of resolved forced trains, sampled on `grid` at time `t`.
pub fn superpose_trains(
    trains: &[OffsetTrain],
    grid: Grid1D,
    t: f64,
) -> Result<WaveField, AnalyticError> {
    if trains.is_empty() {
        return Err(AnalyticError::NothingToSuperpose);
    }
    let field = crate::grid::sample_profile(
        |x| trains.iter().map(|tr| train_value(tr, x, t)).sum(),
        grid,
        t,
    )?;
    Ok(field)
}

/// Amplitude of two merged solitons: their arithmetic mean.
pub fn merge_amplitude(a1: f64, a2: f64) -> Result<f64, AnalyticError> {
    if !(a1 > 0.0 && a2 > 0.0) {
        return Err(AnalyticError::BadAmplitude(a1, a2));
    }
    Ok(0.5 * (a1 + a2))
}

/// `f(x + t) − drift·t`. This solves `W_T − W_X = −drift`.
pub fn linear_wave<F: Fn(f64) -> f64>(f: F, drift: f64, x: f64, t: f64) -> f64 {
    f(x + t) - drift * t
}

/// Change of variables between the 6-normalized equation and
/// `P_T + P P_X + δ P_XXX + C_P = 0`:
///
/// `P(X, T) = 6 u(X/√δ, T/√δ)`, `C_P = 6 C_u / √δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarketScaling {
    delta: f64,
}

impl MarketScaling {
    pub fn new(delta: f64) -> Result<Self, AnalyticError> {
        if !(delta.is_finite() && delta > 0.0) {
            return Err(AnalyticError::BadDelta(delta));
        }
        Ok(Self { delta })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    fn root(&self) -> f64 {
        self.delta.sqrt()
    }

    pub fn space_to_n6(&self, x_market: f64) -> f64 {
        x_market / self.root()
    }

    pub fn space_from_n6(&self, x: f64) -> f64 {
        x * self.root()
    }

    pub fn time_to_n6(&self, t_market: f64) -> f64 {
        t_market / self.root()
    }

    pub fn time_from_n6(&self, t: f64) -> f64 {
        t * self.root()
    }

    pub fn amplitude_to_n6(&self, p: f64) -> f64 {
        p / 6.0
    }

    pub fn amplitude_from_n6(&self, u: f64) -> f64 {
        6.0 * u
    }

    pub fn forcing_to_n6(&self, c_market: f64) -> f64 {
        c_market * self.root() / 6.0
    }

    pub fn forcing_from_n6(&self, c: f64) -> f64 {
        6.0 * c / self.root()
    }

    /// Field in market variables → field in 6-normalized variables.
    pub fn field_to_n6(&self, field: &WaveField) -> Result<WaveField, AnalyticError> {
        let g = field.grid();
        let grid = Grid1D::new(self.space_to_n6(g.length()), g.nx())?;
        let samples = field.samples().iter().map(|&p| self.amplitude_to_n6(p)).collect();
        Ok(WaveField::new(grid, samples, self.time_to_n6(field.time()))?)
    }

    pub fn field_from_n6(&self, field: &WaveField) -> Result<WaveField, AnalyticError> {
        let g = field.grid();
        let grid = Grid1D::new(self.space_from_n6(g.length()), g.nx())?;
        let samples = field.samples().iter().map(|&u| self.amplitude_from_n6(u)).collect();
        Ok(WaveField::new(grid, samples, self.time_from_n6(field.time()))?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // sixth-order central differences
    fn d1<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> f64 {
        (-f(x - 3.0 * h) + 9.0 * f(x - 2.0 * h) - 45.0 * f(x - h) + 45.0 * f(x + h)
            - 9.0 * f(x + 2.0 * h)
            + f(x + 3.0 * h))
            / (60.0 * h)
    }

    fn d3<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> f64 {
        (-7.0 * f(x - 4.0 * h) + 72.0 * f(x - 3.0 * h) - 338.0 * f(x - 2.0 * h)
            + 488.0 * f(x - h)
            - 488.0 * f(x + h)
            + 338.0 * f(x + 2.0 * h)
            - 72.0 * f(x + 3.0 * h)
            + 7.0 * f(x + 4.0 * h))
            / (240.0 * h * h * h)
    }

    fn residual_n6<F: Fn(f64, f64) -> f64>(u: F, c: f64, x: f64, t: f64, h: f64, ht: f64) -> f64 {
        let ut = d1(&|s| u(x, s), t, ht);
        let ux = d1(&|s| u(s, t), x, h);
        let uxxx = d3(&|s| u(s, t), x, h);
        ut + 6.0 * u(x, t) * ux + uxxx + c
    }

    #[test]
    fn soliton_basics() {
        let p = SolitonParam::new(1.0, 3.0, 0.0).unwrap();
        assert_eq!(soliton(&p, 3.0, 0.0), 2.0);
        let half = (2f64.sqrt()).acosh();
        assert!((half - 0.8814).abs() < 1e-4);
        assert!((soliton(&p, 3.0 + half, 0.0) - 1.0).abs() < 1e-12);
        let p2 = SolitonParam::new(2.0, 0.0, 0.0).unwrap();
        assert!((soliton(&p2, 16.0, 1.0) - 8.0).abs() < 1e-12);
        assert!(SolitonParam::new(0.0, 0.0, 0.0).is_err());
        assert!(SolitonParam::new(1.0, 0.0, -1.0).is_err());
    }

    #[test]
    fn soliton_residual_vanishes() {
        for &k in &[0.5, 1.0, 2.0] {
            let p = SolitonParam::new(k, 0.0, 0.0).unwrap();
            for i in 0..41 {
                let x = -5.0 + 0.25 * i as f64;
                let r = residual_n6(|x, t| soliton(&p, x, t), 0.0, x, 0.3, 1e-2 / k, 1e-2 / k.powi(3));
                assert!(r.abs() < 1e-6 * k.powi(5).max(1.0), "κ={k} x={x} r={r}");
            }
        }
    }

    #[test]
    fn forced_soliton_residual_vanishes() {
        let p = SolitonParam::new(1.0, 0.0, 0.5).unwrap();
        for i in 0..41 {
            let x = -3.0 + 0.25 * i as f64;
            let r = residual_n6(|x, t| forced_soliton(&p, x, t), 0.5, x, 0.7, 1e-2, 1e-2);
            assert!(r.abs() < 1e-6, "x={x} r={r}");
        }
    }

    #[test]
    fn forced_reduces_when_unforced() {
        let p = SolitonParam::new(1.3, 2.0, 0.0).unwrap();
        for &(x, t) in &[(0.0, 0.0), (2.5, 0.1), (7.0, 1.0)] {
            assert_eq!(forced_soliton(&p, x, t), soliton(&p, x, t));
        }
    }

    #[test]
    fn forced_peak_track() {
        let p = SolitonParam::new(1.0, 0.0, 0.5).unwrap();
        // vertex of 4t − 1.5t² at t = 4/3
        let t_max = 4.0 / 3.0;
        assert!((p.peak_offset(t_max) - 8.0 / 3.0).abs() < 1e-12);
        assert!(p.peak_offset(t_max - 0.01) < p.peak_offset(t_max));
        assert!(p.peak_offset(t_max + 0.01) < p.peak_offset(t_max));
        let t = 0.9;
        let height = forced_soliton(&p, p.peak_offset(t), t);
        assert!((height - (2.0 - 0.5 * t)).abs() < 1e-12);
    }

    #[test]
    fn return_time_values() {
        let p = SolitonParam::new(1.0, 0.0, 0.5).unwrap();
        let r = return_time(&p).unwrap();
        assert!((r.model - 8.0 / 3.0).abs() < 1e-12);
        assert!((r.printed - 16.0).abs() < 1e-12);
        let r2 = return_time(&SolitonParam::new(2.0, 0.0, 0.5).unwrap()).unwrap();
        assert!((r2.model / r.model - 4.0).abs() < 1e-12);
        let r3 = return_time(&SolitonParam::new(1.0, 0.0, 1.0).unwrap()).unwrap();
        assert!((r3.model / r.model - 0.5).abs() < 1e-12);
        assert_eq!(
            return_time(&SolitonParam::new(1.0, 0.0, 0.0).unwrap()),
            Err(AnalyticError::NoReturn)
        );
    }

    #[test]
    fn return_time_matches_peak_tracking() {
        // oracle: march the analytic field on a fine x-grid and watch the argmax
        let p = SolitonParam::new(1.0, 0.0, 0.5).unwrap();
        let expected = return_time(&p).unwrap().model;
        let dt = 1e-4;
        let mut t = 0.5;
        let mut prev = f64::INFINITY;
        let found = loop {
            let (mut best_x, mut best) = (0.0, f64::NEG_INFINITY);
            for i in 0..=2000 {
                let x = -1.0 + i as f64 * 5e-3;
                let v = forced_soliton(&p, x, t);
                if v > best {
                    best = v;
                    best_x = x;
                }
            }
            if best_x <= 0.0 && prev > 0.0 {
                break t;
            }
            prev = best_x;
            t += dt;
        };
        assert!((found - expected).abs() / expected < 1e-3, "{found} vs {expected}");
    }

    #[test]
    fn train_profile_and_predictions() {
        let one = TrainSpec::new(1, 1.0, 0.0, 0.0).unwrap();
        let sol = SolitonParam::new(1.0, 0.0, 0.0).unwrap();
        for &x in &[-1.0, 0.0, 0.4, 2.0] {
            assert_eq!(train_profile(&one, x), soliton(&sol, x, 0.0));
        }
        assert_eq!(train_profile(&TrainSpec::new(2, 1.0, 0.0, 0.0).unwrap(), 0.0), 6.0);
        assert_eq!(train_profile(&TrainSpec::new(3, 1.0, 0.0, 0.0).unwrap(), 0.0), 12.0);

        let p3 = train_predictions(&TrainSpec::new(3, 1.0, 0.0, 0.0).unwrap());
        assert_eq!(p3.amplitudes, vec![2.0, 8.0, 18.0]);
        assert_eq!(p3.speeds, vec![4.0, 16.0, 36.0]);
        let p4 = train_predictions(&TrainSpec::new(4, 0.7, 0.0, 0.0).unwrap());
        assert_eq!(p4.arrival_ratios, vec![1.0, 4.0, 9.0, 16.0]);
        assert_eq!(TrainSpec::new(0, 1.0, 0.0, 0.0), Err(AnalyticError::EmptyTrain));
    }

    #[test]
    fn merge_rule() {
        assert_eq!(merge_amplitude(4.5, 2.25).unwrap(), 3.375);
        assert_eq!(merge_amplitude(1.7, 1.7).unwrap(), 1.7);
        assert_eq!(merge_amplitude(2.0, 8.0).unwrap(), 5.0);
        assert!(merge_amplitude(0.0, 1.0).is_err());
    }

    #[test]
    fn linear_wave_residual() {
        assert_eq!(linear_wave(|_| 0.0, 1.0, 3.0, 2.0), -2.0);
        let h = 1e-3;
        for &drift in &[0.0, 0.7] {
            for i in 0..20 {
                let x = 0.3 * i as f64;
                let t = 0.5;
                let f = |s: f64| s.sin() + 0.3 * (2.0 * s).cos();
                let wt = (linear_wave(f, drift, x, t + h) - linear_wave(f, drift, x, t - h)) / (2.0 * h);
                let wx = (linear_wave(f, drift, x + h, t) - linear_wave(f, drift, x - h, t)) / (2.0 * h);
                assert!((wt - wx + drift).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn market_scaling_transports_solutions() {
        // P(X,T) = 6u(X/√δ, T/√δ) must solve P_T + P P_X + δ P_XXX + C_P = 0
        for &delta in &[0.25, 1.0, 3.0] {
            let s = MarketScaling::new(delta).unwrap();
            let c_u = 0.4;
            let p = SolitonParam::new(1.0, 0.0, c_u).unwrap();
            let c_p = s.forcing_from_n6(c_u);
            assert!((s.forcing_to_n6(c_p) - c_u).abs() < 1e-15);
            let big_p = |x: f64, t: f64| {
                s.amplitude_from_n6(forced_soliton(&p, s.space_to_n6(x), s.time_to_n6(t)))
            };
            let h = 1e-2;
            for i in 0..15 {
                let x = -2.0 + 0.3 * i as f64;
                let t = 0.4;
                let pt = d1(&|v| big_p(x, v), t, h);
                let px = d1(&|v| big_p(v, t), x, h);
                let pxxx = d3(&|v| big_p(v, t), x, h);
                let r = pt + big_p(x, t) * px + delta * pxxx + c_p;
                assert!(r.abs() < 1e-5, "δ={delta} x={x} r={r}");
            }
        }
        assert!(MarketScaling::new(0.0).is_err());
    }

    #[test]
    fn superpose_adds_members() {
        let g = Grid1D::new(40.0, 400).unwrap();
        let spec = TrainSpec::new(2, 0.5, 20.0, 0.0).unwrap();
        let f = superpose_trains(&[OffsetTrain { spec, time_offset: 0.0 }], g, 0.0).unwrap();
        // at t = 0 the resolved members sit on top of each other: 0.5 + 2
        assert!((f.samples()[200] - 2.5).abs() < 1e-12);
        assert!(superpose_trains(&[], g, 0.0).is_err());
    }
}
