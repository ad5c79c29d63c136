//! Time integration of `u_t + 6 u u_x + u_xxx + C = 0` on a periodic grid.
//!
//! Two schemes are available:
//!
//! - [`Scheme::ZabuskyKruskal`]: leapfrog with the three-point averaged
//!   nonlinearity, started by one midpoint step. Second order in space and
//!   time, conditionally stable.
//! - [`Scheme::Spectral`]: Fourier pseudospectral, dispersion integrated
//!   exactly by an integrating factor, nonlinearity by classical RK4 with
//!   2/3-rule dealiasing.
//!
//! Both conserve `∫u dx` to roundoff and apply the forcing `C` as a uniform
//! sink, so `d/dt ∫u dx = −C L` holds exactly.

mod diagnostics;
mod spectral;
mod zk;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analytic::{AnalyticError, MarketScaling};
use crate::grid::{GridError, WaveField};

pub use diagnostics::{
    fission, forced_return, invariants, spectral_derivative, FissionReport, Invariants,
    ReturnMeasurement, SolitonMeasurement,
};

/// Blow-up threshold on `max |u|`.
pub const BLOWUP_LINF: f64 = 1e6;

#[derive(Debug, Error, PartialEq)]
pub enum SolverError {
    #[error("time step must be finite and positive, got {0}")]
    BadStep(f64),
    #[error("duration must be finite and non-negative, got {0}")]
    BadDuration(f64),
    #[error("forcing must be finite and non-negative, got {0}")]
    BadForcing(f64),
    #[error(
        "dt = {dt:.3e} exceeds the Zabusky–Kruskal bound {bound:.3e} \
         (dx³/(4 + 6 dx² max|u|)); lower --dt or use --scheme spectral"
    )]
    Unstable { dt: f64, bound: f64 },
    #[error("run needs {needed} steps but max_steps is {max}")]
    TooManySteps { needed: usize, max: usize },
    #[error("blow-up at step {step} (t = {time}): max|u| = {linf}")]
    BlowUp { step: usize, time: f64, linf: f64 },
    #[error("expected {expected} separated solitons, found {found}")]
    TooFewSolitons { expected: usize, found: usize },
    #[error("peak did not return to its start within t = {horizon}")]
    NoReturn { horizon: f64 },
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
}

impl SolverError {
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            SolverError::BlowUp { .. }
                | SolverError::TooFewSolitons { .. }
                | SolverError::NoReturn { .. }
                | SolverError::TooManySteps { .. }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    ZabuskyKruskal,
    Spectral,
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::ZabuskyKruskal => "zabusky-kruskal",
            Scheme::Spectral => "pseudospectral-rk4",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub scheme: Scheme,
    pub dt: f64,
    pub forcing: f64,
    pub max_steps: usize,
}

/// Largest stable Zabusky–Kruskal step for grid spacing `dx` and amplitude
/// bound `umax`.
pub fn zk_step_bound(dx: f64, umax: f64) -> f64 {
    dx.powi(3) / (4.0 + 6.0 * dx * dx * umax.abs())
}

/// Step used by [`SolverConfig::auto`] for the spectral scheme: a quarter of
/// the advective CFL limit `dx / (6 max|u|)`.
pub fn spectral_step(dx: f64, umax: f64) -> f64 {
    0.25 * dx / (6.0 * umax.abs().max(1.0))
}

impl SolverConfig {
    pub const DEFAULT_MAX_STEPS: usize = 50_000_000;

    pub fn new(scheme: Scheme, dt: f64, forcing: f64) -> Result<Self, SolverError> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(SolverError::BadStep(dt));
        }
        if !(forcing.is_finite() && forcing >= 0.0) {
            return Err(SolverError::BadForcing(forcing));
        }
        Ok(Self {
            scheme,
            dt,
            forcing,
            max_steps: Self::DEFAULT_MAX_STEPS,
        })
    }

    /// Chooses `dt` for `field`, leaving headroom for amplitudes up to
    /// `umax` (pass at least the expected peak of the run).
    pub fn auto(
        scheme: Scheme,
        field: &WaveField,
        forcing: f64,
        umax: f64,
    ) -> Result<Self, SolverError> {
        let dx = field.grid().dx();
        let umax = umax.max(field.norms().linf);
        let dt = match scheme {
            Scheme::ZabuskyKruskal => 0.9 * zk_step_bound(dx, umax),
            Scheme::Spectral => spectral_step(dx, umax),
        };
        Self::new(scheme, dt, forcing)
    }

    pub fn with_max_steps(mut self, max_steps: usize) -> Self {
        self.max_steps = max_steps;
        self
    }

    /// Checks the configuration against the field it will advance.
    pub fn validate(&self, field: &WaveField) -> Result<(), SolverError> {
        Self::new(self.scheme, self.dt, self.forcing)?;
        if self.scheme == Scheme::ZabuskyKruskal {
            let bound = zk_step_bound(field.grid().dx(), field.norms().linf);
            if self.dt > bound {
                return Err(SolverError::Unstable { dt: self.dt, bound });
            }
        }
        Ok(())
    }

    /// Number of steps and the exact step that land on `duration`.
    pub fn plan(&self, duration: f64) -> Result<(usize, f64), SolverError> {
        if !(duration.is_finite() && duration >= 0.0) {
            return Err(SolverError::BadDuration(duration));
        }
        if duration == 0.0 {
            return Ok((0, self.dt));
        }
        let needed = (duration / self.dt - 1e-9).ceil().max(1.0) as usize;
        if needed > self.max_steps {
            return Err(SolverError::TooManySteps {
                needed,
                max: self.max_steps,
            });
        }
        Ok((needed, duration / needed as f64))
    }
}

enum State {
    Zk(zk::ZkState),
    Spectral(Box<spectral::SpectralState>),
}

/// Stepwise integrator. [`evolve`] drives one to a target time; use this
/// directly to observe the solution after every step.
pub struct Integrator {
    state: State,
    field: WaveField,
    dt: f64,
    steps: usize,
}

impl Integrator {
    /// Prepares to advance `field` with constant step `dt` (which must also
    /// satisfy `cfg`'s stability constraint).
    pub fn new(field: &WaveField, cfg: &SolverConfig, dt: f64) -> Result<Self, SolverError> {
        let mut checked = *cfg;
        checked.dt = dt;
        checked.validate(field)?;
        let state = match cfg.scheme {
            Scheme::ZabuskyKruskal => State::Zk(zk::ZkState::new(field, dt, cfg.forcing)),
            Scheme::Spectral => {
                State::Spectral(Box::new(spectral::SpectralState::new(field, dt, cfg.forcing)))
            }
        };
        Ok(Self {
            state,
            field: field.clone(),
            dt,
            steps: 0,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn time(&self) -> f64 {
        self.field.time()
    }

    /// Current solution.
    pub fn field(&self) -> &WaveField {
        &self.field
    }

    pub fn step(&mut self) -> Result<(), SolverError> {
        let start = self.field.time() - self.steps as f64 * self.dt;
        let samples = match &mut self.state {
            State::Zk(s) => s.step(),
            State::Spectral(s) => s.step(),
        };
        self.steps += 1;
        let time = start + self.steps as f64 * self.dt;
        let linf = samples.iter().fold(0.0_f64, |m, v| {
            if v.is_finite() {
                m.max(v.abs())
            } else {
                f64::INFINITY
            }
        });
        if !(linf <= BLOWUP_LINF) {
            return Err(SolverError::BlowUp {
                step: self.steps,
                time,
                linf,
            });
        }
        self.field = WaveField::new(*self.field.grid(), samples, time)?;
        Ok(())
    }
}

/// Outcome of an observed run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evolution {
    pub field: WaveField,
    pub steps: usize,
    pub dt: f64,
    /// `(t, invariants)` sampled every `invariants_every` steps, first and
    /// last state included.
    pub invariants: Vec<(f64, Invariants)>,
    /// Snapshots every `snapshot_every` steps, first and last included.
    pub snapshots: Vec<WaveField>,
}

impl Evolution {
    /// `t,I1,I2,I3` log.
    pub fn invariants_csv(&self) -> String {
        let mut out = String::from("t,I1,I2,I3\n");
        for (t, inv) in &self.invariants {
            out.push_str(&format!("{t},{},{},{}\n", inv.i1, inv.i2, inv.i3));
        }
        out
    }
}

/// Recording cadence for [`evolve_observed`]. `0` disables a channel.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Observation {
    pub invariants_every: usize,
    pub snapshot_every: usize,
}

/// Advances `field` by `duration`.
pub fn evolve(field: &WaveField, cfg: &SolverConfig, duration: f64) -> Result<WaveField, SolverError> {
    evolve_observed(field, cfg, duration, Observation::default()).map(|e| e.field)
}

pub fn evolve_observed(
    field: &WaveField,
    cfg: &SolverConfig,
    duration: f64,
    observe: Observation,
) -> Result<Evolution, SolverError> {
    let (steps, dt) = cfg.plan(duration)?;
    cfg.validate(field)?;
    let mut invariant_log = Vec::new();
    let mut snapshots = Vec::new();
    if observe.invariants_every > 0 {
        invariant_log.push((field.time(), invariants(field)));
    }
    if observe.snapshot_every > 0 {
        snapshots.push(field.clone());
    }
    if steps == 0 {
        return Ok(Evolution {
            field: field.clone(),
            steps,
            dt,
            invariants: invariant_log,
            snapshots,
        });
    }
    let mut integrator = Integrator::new(field, cfg, dt)?;
    for n in 1..=steps {
        integrator.step()?;
        let last = n == steps;
        let current = integrator.field();
        if observe.invariants_every > 0 && (n % observe.invariants_every == 0 || last) {
            invariant_log.push((current.time(), invariants(current)));
        }
        if observe.snapshot_every > 0 && (n % observe.snapshot_every == 0 || last) {
            snapshots.push(current.clone());
        }
    }
    let final_time = field.time() + duration;
    Ok(Evolution {
        field: integrator.field().clone().with_time(final_time),
        steps,
        dt,
        invariants: invariant_log,
        snapshots,
    })
}

/// Evolves a field of `P_T + P P_X + δ P_XXX + C_P = 0` by mapping it onto
/// the 6-normalized equation and back. `cfg.forcing` is read as `C_P` and
/// `duration` in market time.
pub fn evolve_market(
    field: &WaveField,
    delta: f64,
    cfg: &SolverConfig,
    duration: f64,
) -> Result<WaveField, SolverError> {
    let scaling = MarketScaling::new(delta)?;
    let n6 = scaling.field_to_n6(field)?;
    let mut inner = *cfg;
    inner.forcing = scaling.forcing_to_n6(cfg.forcing);
    inner.dt = scaling.time_to_n6(cfg.dt);
    let out = evolve(&n6, &inner, scaling.time_to_n6(duration))?;
    Ok(scaling.field_from_n6(&out)?)
}

#[cfg(test)]
mod tests;
