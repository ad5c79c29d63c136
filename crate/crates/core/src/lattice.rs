//! Periodic chain of non-harmonic oscillators and its continuum limit.
//!
//! Site `i` obeys
//!
//! `S̈_i / k = Δ_i + α [(S_{i+1} − S_i)² − (S_i − S_{i−1})²] + C1`,
//!
//! with `Δ_i = S_{i+1} − 2S_i + S_{i−1}`. The bracket is the lattice form of
//! `2 S′ S″ h³`, so the chain is the Fermi–Pasta–Ulam α-model with potential
//! `k (r²/2 + α r³/3)` per bond `r = S_{i+1} − S_i`.
//!
//! With `τ = √k t`, `y = i`, `X = y − τ`, `T = ε τ / 2`, `ε = 2α` the strain
//! `P = S_y` follows `P_T + P P_X + δ P_XXX = 0`, `δ = 1/(12ε)`, to first
//! order in `ε`. [`continuum_compare`] checks this numerically.

use std::fmt::Write as _;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analytic::{AnalyticError, MarketScaling};
use crate::grid::{Grid1D, GridError, WaveField};
use crate::kdv::{self, Scheme, SolverConfig, SolverError};

#[derive(Debug, Error, PartialEq)]
pub enum LatticeError {
    #[error("invalid chain configuration: {0}")]
    BadConfig(String),
    #[error("state has {got} sites but the chain has {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("dt = {dt} exceeds the stability bound 0.1/√k = {bound}")]
    Unstable { dt: f64, bound: f64 },
    #[error("chain blew up at t = {t} (max |S| = {max})")]
    BlowUp { t: f64, max: f64 },
    #[error(
        "continuum time T = ετ/2 = {t_kdv:e} is degenerate; \
         α must be zero (linear route) or large enough to evolve"
    )]
    Degenerate { t_kdv: f64 },
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
}

impl LatticeError {
    pub fn is_numerical(&self) -> bool {
        match self {
            LatticeError::BlowUp { .. } => true,
            LatticeError::Solver(e) => e.is_numerical(),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainConfig {
    pub k: f64,
    pub alpha: f64,
    pub c1: f64,
    /// Site spacing, only used to label positions.
    pub h: f64,
    pub n: usize,
    pub dt: f64,
}

impl ChainConfig {
    pub fn new(k: f64, alpha: f64, c1: f64, h: f64, n: usize, dt: f64) -> Result<Self, LatticeError> {
        let bad = |m: &str| Err(LatticeError::BadConfig(m.to_string()));
        if !(k.is_finite() && k > 0.0) {
            return bad("k must be positive");
        }
        if !(h.is_finite() && h > 0.0) {
            return bad("h must be positive");
        }
        if !(dt.is_finite() && dt > 0.0) {
            return bad("dt must be positive");
        }
        if !(alpha.is_finite() && c1.is_finite()) {
            return bad("α and C1 must be finite");
        }
        if n < 3 {
            return bad("the ring needs at least 3 sites");
        }
        let bound = Self::step_bound(k);
        if dt > bound {
            return Err(LatticeError::Unstable { dt, bound });
        }
        Ok(Self {
            k,
            alpha,
            c1,
            h,
            n,
            dt,
        })
    }

    /// Empirical Verlet bound `0.1/√k`.
    pub fn step_bound(k: f64) -> f64 {
        0.1 / k.sqrt()
    }

    /// Harmonic-chain angular frequency of mode `m`: `2√k |sin(πm/N)|`.
    pub fn mode_frequency(&self, m: usize) -> f64 {
        2.0 * self.k.sqrt() * (std::f64::consts::PI * m as f64 / self.n as f64).sin().abs()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainState {
    pub displacements: Vec<f64>,
    pub velocities: Vec<f64>,
    pub t: f64,
}

impl ChainState {
    pub fn at_rest(n: usize) -> Self {
        Self {
            displacements: vec![0.0; n],
            velocities: vec![0.0; n],
            t: 0.0,
        }
    }

    fn check(&self, cfg: &ChainConfig) -> Result<(), LatticeError> {
        for len in [self.displacements.len(), self.velocities.len()] {
            if len != cfg.n {
                return Err(LatticeError::SizeMismatch {
                    expected: cfg.n,
                    got: len,
                });
            }
        }
        Ok(())
    }

    pub fn momentum(&self) -> f64 {
        self.velocities.iter().sum()
    }
}

/// Discrete second difference with periodic wrap.
pub fn second_difference(s: &[f64]) -> Vec<f64> {
    let n = s.len();
    (0..n)
        .map(|i| s[(i + 1) % n] - 2.0 * s[i] + s[(i + n - 1) % n])
        .collect()
}

fn accel_into(s: &[f64], cfg: &ChainConfig, out: &mut [f64]) {
    let n = s.len();
    for i in 0..n {
        let right = s[(i + 1) % n] - s[i];
        let left = s[i] - s[(i + n - 1) % n];
        let force = (right - left) + cfg.alpha * (right * right - left * left) + cfg.c1;
        out[i] = cfg.k * force;
    }
}

pub fn chain_accel(state: &ChainState, cfg: &ChainConfig) -> Result<Vec<f64>, LatticeError> {
    state.check(cfg)?;
    let mut out = vec![0.0; cfg.n];
    accel_into(&state.displacements, cfg, &mut out);
    Ok(out)
}

/// `Σ v²/2 + k Σ (r²/2 + α r³/3) − k C1 Σ S`.
pub fn chain_energy(state: &ChainState, cfg: &ChainConfig) -> f64 {
    let s = &state.displacements;
    let n = s.len();
    let kinetic: f64 = state.velocities.iter().map(|v| 0.5 * v * v).sum();
    let potential: f64 = (0..n)
        .map(|i| {
            let r = s[(i + 1) % n] - s[i];
            r * r / 2.0 + cfg.alpha * r * r * r / 3.0 - cfg.c1 * s[i]
        })
        .sum();
    kinetic + cfg.k * potential
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainTrajectory {
    pub config: ChainConfig,
    pub states: Vec<ChainState>,
}

impl ChainTrajectory {
    pub fn last(&self) -> &ChainState {
        self.states.last().expect("trajectory holds the initial state")
    }

    /// `t` then one displacement column per site.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for i in 0..self.config.n {
            let _ = write!(out, ",s{i}");
        }
        out.push('\n');
        for st in &self.states {
            let _ = write!(out, "{}", st.t);
            for s in &st.displacements {
                let _ = write!(out, ",{s}");
            }
            out.push('\n');
        }
        out
    }
}

/// Velocity-Verlet integration for `duration`, keeping every
/// `sample_every`-th state (`0` keeps only the first and last).
pub fn integrate_chain(
    state: &ChainState,
    cfg: &ChainConfig,
    duration: f64,
    sample_every: usize,
) -> Result<ChainTrajectory, LatticeError> {
    integrate_with(state, cfg, duration, sample_every, |_| {})
}

fn integrate_with(
    state: &ChainState,
    cfg: &ChainConfig,
    duration: f64,
    sample_every: usize,
    mut observe: impl FnMut(&ChainState),
) -> Result<ChainTrajectory, LatticeError> {
    state.check(cfg)?;
    if !(duration.is_finite() && duration >= 0.0) {
        return Err(LatticeError::BadConfig(format!("bad duration {duration}")));
    }
    let steps = (duration / cfg.dt - 1e-9).ceil().max(0.0) as usize;
    let dt = if steps == 0 { cfg.dt } else { duration / steps as f64 };
    let mut cur = state.clone();
    let mut acc = vec![0.0; cfg.n];
    accel_into(&cur.displacements, cfg, &mut acc);
    let mut states = vec![cur.clone()];
    observe(&cur);
    for step in 1..=steps {
        for ((s, v), a) in cur.displacements.iter_mut().zip(&mut cur.velocities).zip(&acc) {
            *v += 0.5 * dt * a;
            *s += dt * *v;
        }
        accel_into(&cur.displacements, cfg, &mut acc);
        for (v, a) in cur.velocities.iter_mut().zip(&acc) {
            *v += 0.5 * dt * a;
        }
        cur.t = state.t + step as f64 * dt;
        let max = cur.displacements.iter().fold(0.0_f64, |m, s| m.max(s.abs()));
        if !(max.is_finite() && max < 1e12) {
            return Err(LatticeError::BlowUp { t: cur.t, max });
        }
        observe(&cur);
        if (sample_every > 0 && step % sample_every == 0) || step == steps {
            states.push(cur.clone());
        }
    }
    Ok(ChainTrajectory {
        config: *cfg,
        states,
    })
}

/// Normal-mode coordinate `(2/N) Σ S_i sin(2π m i / N)`.
pub fn mode_amplitude(s: &[f64], m: usize) -> f64 {
    let n = s.len() as f64;
    let w = 2.0 * std::f64::consts::PI * m as f64 / n;
    2.0 / n * s.iter().enumerate().map(|(i, v)| v * (w * i as f64).sin()).sum::<f64>()
}

/// Harmonic energy `(N/4)(q̇² + ω² q²)` held by sine mode `m`.
pub fn mode_energy(state: &ChainState, cfg: &ChainConfig, m: usize) -> f64 {
    let q = mode_amplitude(&state.displacements, m);
    let qd = mode_amplitude(&state.velocities, m);
    let w = cfg.mode_frequency(m);
    0.25 * cfg.n as f64 * (qd * qd + w * w * q * q)
}

/// Starts the chain in sine mode `m` and measures its angular frequency from
/// zero crossings of the mode coordinate over `periods` nominal periods.
pub fn measure_mode_frequency(cfg: &ChainConfig, m: usize, periods: f64) -> Result<f64, LatticeError> {
    let n = cfg.n;
    if m.is_multiple_of(n) || 2 * (m % n) == n {
        return Err(LatticeError::BadConfig(format!("sine mode {m} vanishes on {n} sites")));
    }
    let w = 2.0 * std::f64::consts::PI * m as f64 / n as f64;
    // cosine in time so the first crossing is a quarter period in
    let state = ChainState {
        displacements: (0..n).map(|i| 1e-3 * (w * i as f64).sin()).collect(),
        velocities: vec![0.0; n],
        t: 0.0,
    };
    let nominal = cfg.mode_frequency(m);
    let duration = periods * 2.0 * std::f64::consts::PI / nominal;
    let mut prev: Option<(f64, f64)> = None;
    let mut crossings = Vec::new();
    integrate_with(&state, cfg, duration, 0, |st| {
        let q = mode_amplitude(&st.displacements, m);
        if let Some((t0, q0)) = prev {
            if q0 != 0.0 && q0.signum() != q.signum() {
                crossings.push(t0 + (st.t - t0) * q0 / (q0 - q));
            }
        }
        prev = Some((st.t, q));
    })?;
    if crossings.len() < 3 {
        return Err(LatticeError::BadConfig(format!(
            "only {} zero crossings; run more periods",
            crossings.len()
        )));
    }
    let span = crossings[crossings.len() - 1] - crossings[0];
    Ok(std::f64::consts::PI * (crossings.len() - 1) as f64 / span)
}

fn fft_pair(n: usize) -> (std::sync::Arc<dyn rustfft::Fft<f64>>, std::sync::Arc<dyn rustfft::Fft<f64>>) {
    let mut planner = FftPlanner::<f64>::new();
    (planner.plan_fft_forward(n), planner.plan_fft_inverse(n))
}

fn signed_wavenumber(j: usize, n: usize) -> f64 {
    let s = if j <= n / 2 { j as f64 } else { j as f64 - n as f64 };
    if 2 * j == n {
        0.0
    } else {
        2.0 * std::f64::consts::PI * s / n as f64
    }
}

/// `d/dy` of unit-spaced periodic samples, evaluated at `y + shift`.
fn strain_at(s: &[f64], shift: f64) -> Vec<f64> {
    let n = s.len();
    let (fwd, inv) = fft_pair(n);
    let mut buf: Vec<Complex64> = s.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fwd.process(&mut buf);
    for (j, c) in buf.iter_mut().enumerate() {
        let k = signed_wavenumber(j, n);
        *c *= Complex64::new(0.0, k) * Complex64::from_polar(1.0, k * shift);
    }
    inv.process(&mut buf);
    buf.iter().map(|c| c.re / n as f64).collect()
}

/// Periodic antiderivative of a zero-mean strain.
fn integrate_strain(p: &[f64]) -> Vec<f64> {
    let n = p.len();
    let (fwd, inv) = fft_pair(n);
    let mut buf: Vec<Complex64> = p.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fwd.process(&mut buf);
    for (j, c) in buf.iter_mut().enumerate() {
        let k = signed_wavenumber(j, n);
        *c = if k == 0.0 { Complex64::new(0.0, 0.0) } else { *c / Complex64::new(0.0, k) };
    }
    inv.process(&mut buf);
    buf.iter().map(|c| c.re / n as f64).collect()
}

/// Initial chain state whose strain is `strain` (mean removed) and which
/// moves to the right as the continuum wave does.
pub fn chain_from_strain(strain: &[f64], cfg: &ChainConfig) -> Result<ChainState, LatticeError> {
    if strain.len() != cfg.n {
        return Err(LatticeError::SizeMismatch {
            expected: cfg.n,
            got: strain.len(),
        });
    }
    let mean = strain.iter().sum::<f64>() / strain.len() as f64;
    let p: Vec<f64> = strain.iter().map(|v| v - mean).collect();
    let s = integrate_strain(&p);
    let eps = 2.0 * cfg.alpha;
    let pxx = strain_at(&strain_at(&p, 0.0), 0.0);
    // S_τ = −P + (ε/2) Σ_T with Σ_T = −P²/2 − δ P_XX and ε δ / 2 = 1/24
    let mut s_tau: Vec<f64> = p
        .iter()
        .zip(&pxx)
        .map(|(p, pxx)| -p - 0.25 * eps * p * p - pxx / 24.0)
        .collect();
    let drift = s_tau.iter().sum::<f64>() / s_tau.len() as f64;
    for v in s_tau.iter_mut() {
        *v -= drift;
    }
    let w = cfg.k.sqrt();
    Ok(ChainState {
        displacements: s,
        velocities: s_tau.into_iter().map(|v| w * v).collect(),
        t: 0.0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuumComparison {
    /// Normalized cross-correlation of the two strain fields.
    pub correlation: f64,
    pub tau: f64,
    /// Continuum time `ετ/2`; zero on the linear route.
    pub t_kdv: f64,
    pub epsilon: f64,
    /// `1/(12ε)`; infinite on the linear route.
    pub delta: f64,
    /// True when `α = 0` and the reference is the transported linear wave.
    pub linear_route: bool,
    /// Chain strain in the moving frame.
    pub chain: WaveField,
    /// Continuum prediction on the same sites.
    pub continuum: WaveField,
    pub warning: Option<String>,
}

fn correlation(a: &[f64], b: &[f64]) -> f64 {
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (ma, mb) = (mean(a), mean(b));
    let (mut ab, mut aa, mut bb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        ab += (x - ma) * (y - mb);
        aa += (x - ma) * (x - ma);
        bb += (y - mb) * (y - mb);
    }
    if aa == 0.0 || bb == 0.0 {
        return if aa == bb { 1.0 } else { 0.0 };
    }
    ab / (aa * bb).sqrt()
}

/// Energy fraction above two thirds of the Nyquist wavenumber.
fn spectral_tail(v: &[f64]) -> f64 {
    let n = v.len();
    let (fwd, _) = fft_pair(n);
    let mut buf: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    fwd.process(&mut buf);
    let total: f64 = buf.iter().skip(1).map(|c| c.norm_sqr()).sum();
    if total == 0.0 {
        return 0.0;
    }
    let cut = n / 3;
    let tail: f64 = buf
        .iter()
        .enumerate()
        .filter(|(j, _)| {
            let s = if *j <= n / 2 { *j } else { n - *j };
            s > cut
        })
        .map(|(_, c)| c.norm_sqr())
        .sum();
    tail / total
}

/// Runs the chain from `strain` for `duration` and compares its moving-frame
/// strain with the continuum prediction: the matched KdV evolution for
/// `α ≠ 0`, the rigidly transported profile for `α = 0`.
///
/// `C1` shifts every site equally and so never reaches the strain; it is
/// carried by the chain but absent from the comparison.
pub fn continuum_compare(
    strain: &[f64],
    cfg: &ChainConfig,
    duration: f64,
) -> Result<ContinuumComparison, LatticeError> {
    let init = chain_from_strain(strain, cfg)?;
    let tau = cfg.k.sqrt() * duration;
    let epsilon = 2.0 * cfg.alpha;
    let t_kdv = 0.5 * epsilon * tau;
    let linear_route = cfg.alpha == 0.0;
    if !linear_route && t_kdv.abs() < 1e-6 {
        return Err(LatticeError::Degenerate { t_kdv });
    }
    let traj = integrate_chain(&init, cfg, duration, 0)?;
    let chain_strain = strain_at(&traj.last().displacements, tau);
    let grid = Grid1D::new(cfg.n as f64, cfg.n)?;
    let mean = strain.iter().sum::<f64>() / strain.len() as f64;
    let p0 = WaveField::new(grid, strain.iter().map(|v| v - mean).collect(), 0.0)?;
    let (continuum, delta) = if linear_route {
        (p0.clone().with_time(tau), f64::INFINITY)
    } else {
        let delta = 1.0 / (12.0 * epsilon);
        let scaling = MarketScaling::new(delta.abs())?;
        let n6 = scaling.field_to_n6(&p0)?;
        let umax = 2.0 * n6.norms().linf;
        let kdv_cfg = SolverConfig::auto(Scheme::Spectral, &n6, 0.0, umax)?;
        let out = kdv::evolve(&n6, &kdv_cfg, scaling.time_to_n6(t_kdv.abs()))?;
        (scaling.field_from_n6(&out)?, delta)
    };
    let chain = WaveField::new(grid, chain_strain, traj.last().t)?;
    let tail = spectral_tail(chain.samples());
    let warning = (tail > 0.01).then(|| {
        format!("chain strain carries {:.1}% of its energy above 2/3 Nyquist", 100.0 * tail)
    });
    Ok(ContinuumComparison {
        correlation: correlation(chain.samples(), continuum.samples()),
        tau,
        t_kdv: if linear_route { 0.0 } else { t_kdv },
        epsilon,
        delta,
        linear_route,
        chain,
        continuum,
        warning,
    })
}
