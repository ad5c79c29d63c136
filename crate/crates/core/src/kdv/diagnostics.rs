//! Conserved quantities, soliton fission and forced-return measurements.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::spectral::wavenumbers;
use super::{Integrator, SolverConfig, SolverError};
use crate::analytic::{return_time, soliton, SolitonParam};
use crate::grid::{find_peaks, sample_profile, Grid1D, Peak, WaveField};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Invariants {
    /// `∫ u dx`
    pub i1: f64,
    /// `∫ u² dx`
    pub i2: f64,
    /// `∫ 2u³ − u_x² dx`
    pub i3: f64,
}

/// Fourier derivative of periodic samples on `[0, length)`.
pub fn spectral_derivative(samples: &[f64], length: f64) -> Vec<f64> {
    let n = samples.len();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let mut buf: Vec<Complex64> = samples.iter().map(|&u| Complex64::new(u, 0.0)).collect();
    fwd.process(&mut buf);
    for (c, k) in buf.iter_mut().zip(wavenumbers(n, length)) {
        *c *= Complex64::new(0.0, k);
    }
    inv.process(&mut buf);
    buf.iter().map(|c| c.re / n as f64).collect()
}

/// Rectangle-rule (spectrally accurate for periodic data) invariants, with
/// `u_x` from [`spectral_derivative`].
pub fn invariants(field: &WaveField) -> Invariants {
    let dx = field.grid().dx();
    let u = field.samples();
    let ux = spectral_derivative(u, field.grid().length());
    let (mut i1, mut i2, mut i3) = (0.0, 0.0, 0.0);
    for (&v, &d) in u.iter().zip(&ux) {
        i1 += v;
        i2 += v * v;
        i3 += 2.0 * v * v * v - d * d;
    }
    Invariants {
        i1: i1 * dx,
        i2: i2 * dx,
        i3: i3 * dx,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolitonMeasurement {
    /// Crest height above the forcing background.
    pub amplitude: f64,
    pub speed: f64,
    pub position: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FissionReport {
    /// Emitted solitons, tallest first.
    pub solitons: Vec<SolitonMeasurement>,
    /// Start and end of the speed-measurement window.
    pub window: (f64, f64),
    pub final_field: WaveField,
}

/// Number of sub-intervals used to unwrap peak motion over the window.
const WINDOW_SLICES: usize = 20;

fn tallest(field: &WaveField, n: usize) -> Result<Vec<Peak>, SolverError> {
    let linf = field.norms().linf;
    let mut peaks = find_peaks(field, 0.01 * linf);
    if peaks.len() < n {
        return Err(SolverError::TooFewSolitons {
            expected: n,
            found: peaks.len(),
        });
    }
    peaks.truncate(n);
    Ok(peaks)
}

/// Evolves `field` for `duration` and measures the `expected_n` tallest
/// solitons over the last tenth of the run.
pub fn fission(
    field: &WaveField,
    cfg: &SolverConfig,
    duration: f64,
    expected_n: usize,
) -> Result<FissionReport, SolverError> {
    let (steps, dt) = cfg.plan(duration)?;
    if steps < WINDOW_SLICES * 10 {
        return Err(SolverError::TooManySteps {
            needed: WINDOW_SLICES * 10,
            max: steps,
        });
    }
    let window_start = steps - steps / 10;
    let slice = (steps - window_start) / WINDOW_SLICES;
    let mut integrator = Integrator::new(field, cfg, dt)?;
    let t0 = field.time();
    let mut marks: Vec<usize> = (0..WINDOW_SLICES).map(|s| window_start + s * slice).collect();
    marks.push(steps);
    let mut tracked: Option<Vec<Peak>> = None;
    let mut travelled = vec![0.0; expected_n];
    let mut t_first = 0.0;
    let mut next_mark = 0;
    for n in 1..=steps {
        integrator.step()?;
        if next_mark < marks.len() && n == marks[next_mark] {
            next_mark += 1;
            let current = tallest(integrator.field(), expected_n)?;
            match &tracked {
                None => t_first = integrator.time(),
                Some(prev) => {
                    let grid = field.grid();
                    for (d, (a, b)) in travelled.iter_mut().zip(prev.iter().zip(&current)) {
                        *d += grid.displacement(a.position, b.position);
                    }
                }
            }
            tracked = Some(current);
        }
    }
    let t_last = integrator.time();
    let background = cfg.forcing * (t_last - t0);
    let span = t_last - t_first;
    let solitons = tracked
        .unwrap_or_default()
        .iter()
        .zip(&travelled)
        .map(|(p, d)| SolitonMeasurement {
            amplitude: p.height + background,
            speed: d / span,
            position: p.position,
        })
        .collect();
    Ok(FissionReport {
        solitons,
        window: (t_first, t_last),
        final_field: integrator.field().clone(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReturnMeasurement {
    pub kappa: f64,
    pub forcing: f64,
    /// First time the tracked crest is back at its start.
    pub measured: f64,
    /// `4κ²/(3C)`.
    pub model: f64,
    /// `8κ³/C`, for comparison.
    pub printed: f64,
    /// Largest forward excursion of the crest.
    pub max_excursion: f64,
}

/// Launches a `κ` soliton at mid-grid under `cfg.forcing` and tracks its crest
/// until it re-crosses the launch point.
pub fn forced_return(
    grid: Grid1D,
    kappa: f64,
    cfg: &SolverConfig,
) -> Result<ReturnMeasurement, SolverError> {
    let p = SolitonParam::new(kappa, 0.5 * grid.length(), cfg.forcing)?;
    let predicted = return_time(&p)?;
    let field = sample_profile(|x| soliton(&p, x, 0.0), grid, 0.0)?;
    // the crest certainly returns before three times the larger prediction
    let horizon = 3.0 * predicted.model.max(predicted.printed);
    let steps = ((horizon / cfg.dt).ceil() as usize).min(cfg.max_steps);
    let mut integrator = Integrator::new(&field, cfg, cfg.dt)?;
    let mut pos = field.global_peak().position;
    let mut disp = 0.0_f64;
    let mut max_excursion = 0.0_f64;
    for _ in 0..steps {
        let t_prev = integrator.time();
        integrator.step()?;
        let crest = integrator.field().global_peak().position;
        let d_next = disp + grid.displacement(pos, crest);
        pos = crest;
        if max_excursion > grid.dx() && d_next <= 0.0 {
            let frac = disp / (disp - d_next);
            return Ok(ReturnMeasurement {
                kappa,
                forcing: cfg.forcing,
                measured: t_prev + frac * (integrator.time() - t_prev),
                model: predicted.model,
                printed: predicted.printed,
                max_excursion,
            });
        }
        disp = d_next;
        max_excursion = max_excursion.max(disp);
    }
    Err(SolverError::NoReturn {
        horizon: integrator.time(),
    })
}
