//! Participant probabilities, entropy bookkeeping, and the entropic
//! oscillator systems built on the `D*` / `D**` functions.
//!
//! The two-state systems are integrated in their conservative pairing:
//!
//! ```text
//! harmonic:     p1' =  (γ/p20)(p2 − p20)
//!               p2' = −(γ/p10)(p1 − p10)
//! non-harmonic: p1' = −γ[(p2 − p20)/p20 − (p2 − p20)²/(2 p20²)]
//!               p2' =  (γ/p10)(p1 − p10)
//! ```
//!
//! With these signs `dD*/dt = 0` and `dD**/dt = 0` hold identically. The
//! induced second-order equations are `p2'' = −χ (p2 − p20)` with
//! `χ = γ²/(p10 p20)`, and `(1/k) p2'' = −p2 + α p2² + C1` with
//! `k = 2γ²/(p10 p20)`, `α = 1/(4 p20)`, `C1 = 3 p20 / 4`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum OscillatorError {
    #[error("market has no participants")]
    NoParticipants,
    #[error("informative entropy undefined: p+ − p− = {0} is not positive")]
    NoImbalance(f64),
    #[error("probability {0} outside (0, 1]")]
    BadProbability(f64),
    #[error("negative probability component {value} at index {index}")]
    NegativeComponent { index: usize, value: f64 },
    #[error("reference component {index} is zero")]
    ZeroReference { index: usize },
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("invalid state ({p1}, {p2}): components must lie strictly inside (0, 1)")]
    InvalidState { p1: f64, p2: f64 },
    #[error("invalid reference: p10 = {p10}, p20 = {p20}, γ = {gamma}")]
    InvalidReference { p10: f64, p20: f64, gamma: f64 },
    #[error("dt and duration must be positive (dt = {dt}, duration = {duration})")]
    BadStep { dt: f64, duration: f64 },
    #[error("trajectory left (0, 1) at t = {t}: p1 = {p1}, p2 = {p2}")]
    LeftUnitInterval { t: f64, p1: f64, p2: f64 },
    #[error("orbit escaped the potential well at t = {t}: p2 − p20 = {excursion}")]
    EscapedWell { t: f64, excursion: f64 },
    #[error("not enough samples for regression ({0})")]
    TooShort(usize),
}

impl OscillatorError {
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            OscillatorError::LeftUnitInterval { .. }
                | OscillatorError::EscapedWell { .. }
                | OscillatorError::TooShort(_)
        )
    }
}

/// Bulls and bears.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarketCounts {
    pub bulls: u64,
    pub bears: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParticipantProbabilities {
    pub p_plus: f64,
    pub p_minus: f64,
    /// `K / N`.
    pub p: f64,
    /// `M = N⁺ − N⁻`.
    pub m: i64,
    /// `K = N − M`.
    pub k: i64,
}

pub fn participant_probabilities(
    counts: MarketCounts,
) -> Result<ParticipantProbabilities, OscillatorError> {
    let n = counts.bulls + counts.bears;
    if n == 0 {
        return Err(OscillatorError::NoParticipants);
    }
    let nf = n as f64;
    let m = counts.bulls as i64 - counts.bears as i64;
    let k = n as i64 - m;
    Ok(ParticipantProbabilities {
        p_plus: counts.bulls as f64 / nf,
        p_minus: counts.bears as f64 / nf,
        p: k as f64 / nf,
        m,
        k,
    })
}

/// Informative (`T`) and redundant (`R`) parts, natural log.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropySplit {
    pub informative: f64,
    pub redundant: f64,
}

impl EntropySplit {
    /// Same values in bits, for display.
    pub fn in_bits(&self) -> EntropySplit {
        let ln2 = std::f64::consts::LN_2;
        EntropySplit {
            informative: self.informative / ln2,
            redundant: self.redundant / ln2,
        }
    }
}

fn neg_x_ln_x(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        -x * x.ln()
    }
}

pub fn entropy_split(p_plus: f64, p_minus: f64, p: f64) -> Result<EntropySplit, OscillatorError> {
    let imbalance = p_plus - p_minus;
    if !(imbalance > 0.0) {
        return Err(OscillatorError::NoImbalance(imbalance));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(OscillatorError::BadProbability(p));
    }
    Ok(EntropySplit {
        informative: neg_x_ln_x(imbalance),
        redundant: neg_x_ln_x(p),
    })
}

/// `H = −Σ pᵢ ln pᵢ`; zero components contribute nothing.
pub fn shannon_entropy(p: &[f64]) -> Result<f64, OscillatorError> {
    if let Some((index, &value)) = p.iter().enumerate().find(|(_, v)| **v < 0.0) {
        return Err(OscillatorError::NegativeComponent { index, value });
    }
    Ok(p.iter().map(|&x| neg_x_ln_x(x)).sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TaylorExpansion {
    /// Second-order expansion of `H` around the reference state.
    pub approx_h: f64,
    /// `Σ (pᵢ − pᵢ₀)² / (2 pᵢ₀)`.
    pub d_star: f64,
}

pub fn entropy_taylor(p: &[f64], p0: &[f64]) -> Result<TaylorExpansion, OscillatorError> {
    if p.len() != p0.len() {
        return Err(OscillatorError::LengthMismatch(p.len(), p0.len()));
    }
    if let Some(index) = p0.iter().position(|&v| v <= 0.0) {
        return Err(OscillatorError::ZeroReference { index });
    }
    let mut approx_h = 0.0;
    let mut d_star = 0.0;
    for (&pi, &qi) in p.iter().zip(p0) {
        let d = pi - qi;
        let quad = d * d / (2.0 * qi);
        approx_h -= pi * qi.ln() + d + quad;
        d_star += quad;
    }
    Ok(TaylorExpansion { approx_h, d_star })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbState2 {
    pub p1: f64,
    pub p2: f64,
}

impl ProbState2 {
    pub fn new(p1: f64, p2: f64) -> Result<Self, OscillatorError> {
        let inside = |v: f64| v.is_finite() && v > 0.0 && v < 1.0;
        if inside(p1) && inside(p2) {
            Ok(Self { p1, p2 })
        } else {
            Err(OscillatorError::InvalidState { p1, p2 })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceState {
    pub p10: f64,
    pub p20: f64,
    pub gamma: f64,
}

impl ReferenceState {
    pub fn new(p10: f64, p20: f64, gamma: f64) -> Result<Self, OscillatorError> {
        let inside = |v: f64| v.is_finite() && v > 0.0 && v < 1.0;
        if inside(p10) && inside(p20) && gamma.is_finite() && gamma != 0.0 {
            Ok(Self { p10, p20, gamma })
        } else {
            Err(OscillatorError::InvalidReference { p10, p20, gamma })
        }
    }

    pub fn state(&self) -> ProbState2 {
        ProbState2 {
            p1: self.p10,
            p2: self.p20,
        }
    }
}

pub fn d_star(p: ProbState2, r: &ReferenceState) -> f64 {
    let d1 = p.p1 - r.p10;
    let d2 = p.p2 - r.p20;
    d1 * d1 / (2.0 * r.p10) + d2 * d2 / (2.0 * r.p20)
}

pub fn d_double_star(p: ProbState2, r: &ReferenceState) -> f64 {
    let d1 = p.p1 - r.p10;
    let d2 = p.p2 - r.p20;
    d1 * d1 / (2.0 * r.p10) + d2 * d2 / (2.0 * r.p20)
        - d2 * d2 * d2 / (6.0 * r.p20 * r.p20)
}

/// Oscillator constants derived from a reference state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscParams {
    pub chi: f64,
    /// Stiffness of the non-harmonic equation, `2γ²/(p10 p20)`.
    pub k: f64,
    /// The printed `2γ/p20`, kept for comparison; it is not dimensionally
    /// consistent with `chi` and does not match the integrated dynamics.
    pub k_printed: f64,
    pub alpha: f64,
    pub c1: f64,
    pub c2: f64,
}

pub fn osc_params(r: &ReferenceState) -> OscParams {
    let g2 = r.gamma * r.gamma;
    OscParams {
        chi: g2 / (r.p10 * r.p20),
        k: 2.0 * g2 / (r.p10 * r.p20),
        k_printed: 2.0 * r.gamma / r.p20,
        alpha: 1.0 / (4.0 * r.p20),
        c1: 0.75 * r.p20,
        c2: r.p20,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OscillatorKind {
    Harmonic,
    NonHarmonic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub p1: f64,
    pub p2: f64,
    /// `D*` for harmonic runs, `D**` for non-harmonic ones.
    pub invariant: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub kind: OscillatorKind,
    pub reference: ReferenceState,
    pub dt: f64,
    pub points: Vec<TrajectoryPoint>,
}

impl Trajectory {
    /// Largest deviation of the conserved function from its initial value.
    pub fn invariant_drift(&self) -> f64 {
        let first = self.points[0].invariant;
        self.points
            .iter()
            .map(|p| (p.invariant - first).abs())
            .fold(0.0, f64::max)
    }

    /// Mean period from upward crossings of `p2 = p20`, linearly interpolated.
    pub fn mean_period(&self) -> Option<f64> {
        let p20 = self.reference.p20;
        let mut crossings = Vec::new();
        for w in self.points.windows(2) {
            let a = w[0].p2 - p20;
            let b = w[1].p2 - p20;
            if a < 0.0 && b >= 0.0 {
                let frac = a / (a - b);
                crossings.push(w[0].t + frac * (w[1].t - w[0].t));
            }
        }
        if crossings.len() < 2 {
            return None;
        }
        Some((crossings[crossings.len() - 1] - crossings[0]) / (crossings.len() - 1) as f64)
    }

    pub fn to_csv(&self) -> String {
        let name = match self.kind {
            OscillatorKind::Harmonic => "d_star",
            OscillatorKind::NonHarmonic => "d_double_star",
        };
        let mut out = format!("t,p1,p2,{name}\n");
        for p in &self.points {
            let _ = writeln!(out, "{},{},{},{}", p.t, p.p1, p.p2, p.invariant);
        }
        out
    }
}

fn rk4<F: Fn([f64; 2]) -> [f64; 2]>(f: &F, y: [f64; 2], dt: f64) -> [f64; 2] {
    let add = |a: [f64; 2], b: [f64; 2], s: f64| [a[0] + s * b[0], a[1] + s * b[1]];
    let k1 = f(y);
    let k2 = f(add(y, k1, 0.5 * dt));
    let k3 = f(add(y, k2, 0.5 * dt));
    let k4 = f(add(y, k3, dt));
    [
        y[0] + dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        y[1] + dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
    ]
}

fn integrate<F, G, H>(
    kind: OscillatorKind,
    r: &ReferenceState,
    init: ProbState2,
    dt: f64,
    duration: f64,
    rhs: F,
    invariant: G,
    guard: H,
) -> Result<Trajectory, OscillatorError>
where
    F: Fn([f64; 2]) -> [f64; 2],
    G: Fn(ProbState2) -> f64,
    H: Fn(f64, ProbState2) -> Result<(), OscillatorError>,
{
    if !(dt > 0.0 && duration > 0.0) {
        return Err(OscillatorError::BadStep { dt, duration });
    }
    let steps = (duration / dt).round().max(1.0) as usize;
    let mut points = Vec::with_capacity(steps + 1);
    let mut y = [init.p1, init.p2];
    let s0 = init;
    points.push(TrajectoryPoint {
        t: 0.0,
        p1: s0.p1,
        p2: s0.p2,
        invariant: invariant(s0),
    });
    for n in 1..=steps {
        y = rk4(&rhs, y, dt);
        let t = n as f64 * dt;
        if !(y[0] > 0.0 && y[0] < 1.0 && y[1] > 0.0 && y[1] < 1.0) {
            return Err(OscillatorError::LeftUnitInterval { t, p1: y[0], p2: y[1] });
        }
        let s = ProbState2 { p1: y[0], p2: y[1] };
        guard(t, s)?;
        points.push(TrajectoryPoint {
            t,
            p1: s.p1,
            p2: s.p2,
            invariant: invariant(s),
        });
    }
    Ok(Trajectory {
        kind,
        reference: *r,
        dt,
        points,
    })
}

/// RK4 integration of the harmonic pair; one sample per step.
pub fn integrate_harmonic(
    r: &ReferenceState,
    init: ProbState2,
    dt: f64,
    duration: f64,
) -> Result<Trajectory, OscillatorError> {
    let ReferenceState { p10, p20, gamma } = *r;
    let rhs = move |y: [f64; 2]| [gamma / p20 * (y[1] - p20), -gamma / p10 * (y[0] - p10)];
    integrate(
        OscillatorKind::Harmonic,
        r,
        init,
        dt,
        duration,
        rhs,
        |s| d_star(s, r),
        |_, _| Ok(()),
    )
}

/// RK4 integration of the non-harmonic pair; one sample per step.
///
/// The induced potential for `q = p2 − p20` has a barrier at `q = 2 p20`;
/// crossing it means the orbit is no longer confined.
pub fn integrate_nonharmonic(
    r: &ReferenceState,
    init: ProbState2,
    dt: f64,
    duration: f64,
) -> Result<Trajectory, OscillatorError> {
    let ReferenceState { p10, p20, gamma } = *r;
    // D** at the barrier; orbits with more energy are unbounded
    let barrier = 2.0 * p20 / 3.0;
    let start = d_double_star(init, r);
    if start >= barrier || init.p2 - p20 >= 2.0 * p20 {
        return Err(OscillatorError::EscapedWell {
            t: 0.0,
            excursion: init.p2 - p20,
        });
    }
    let rhs = move |y: [f64; 2]| {
        let q = y[1] - p20;
        [
            -gamma * (q / p20 - q * q / (2.0 * p20 * p20)),
            gamma / p10 * (y[0] - p10),
        ]
    };
    integrate(
        OscillatorKind::NonHarmonic,
        r,
        init,
        dt,
        duration,
        rhs,
        |s| d_double_star(s, r),
        move |t, s| {
            let excursion = s.p2 - p20;
            if excursion >= 2.0 * p20 {
                Err(OscillatorError::EscapedWell { t, excursion })
            } else {
                Ok(())
            }
        },
    )
}

/// Constants read back from a trajectory by regressing the finite-difference
/// `p2''` on `{1, p2, p2²}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecoveredConstants {
    pub k: f64,
    pub alpha: f64,
    pub c1: f64,
}

pub fn recover_nonharmonic_constants(
    traj: &Trajectory,
) -> Result<RecoveredConstants, OscillatorError> {
    let pts = &traj.points;
    if pts.len() < 8 {
        return Err(OscillatorError::TooShort(pts.len()));
    }
    let p20 = traj.reference.p20;
    let dt2 = traj.dt * traj.dt;
    // regress on the centred variable q = p2 − p20 for conditioning, then
    // expand back to the {1, p2, p2²} basis
    let mut rows = Vec::with_capacity(pts.len() - 2);
    let mut rhs = Vec::with_capacity(pts.len() - 2);
    for w in pts.windows(3) {
        let acc = (w[2].p2 - 2.0 * w[1].p2 + w[0].p2) / dt2;
        let q = w[1].p2 - p20;
        rows.push(vec![1.0, q, q * q]);
        rhs.push(acc);
    }
    let c = crate::linalg::least_squares(&rows, &rhs).ok_or(OscillatorError::TooShort(pts.len()))?;
    let (c0, cq, cqq) = (c[0], c[1], c[2]);
    let const_term = c0 - cq * p20 + cqq * p20 * p20;
    let lin_term = cq - 2.0 * cqq * p20;
    let k = -lin_term;
    Ok(RecoveredConstants {
        k,
        alpha: cqq / k,
        c1: const_term / k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> ReferenceState {
        ReferenceState::new(0.5, 0.5, 0.1).unwrap()
    }

    #[test]
    fn counts_to_probabilities() {
        let p = participant_probabilities(MarketCounts { bulls: 60, bears: 40 }).unwrap();
        assert!((p.p_plus - 0.6).abs() < 1e-15);
        assert!((p.p_minus - 0.4).abs() < 1e-15);
        assert_eq!((p.m, p.k), (20, 80));
        assert!((p.p - 0.8).abs() < 1e-15);

        let p = participant_probabilities(MarketCounts { bulls: 50, bears: 50 }).unwrap();
        assert_eq!(p.p_plus - p.p_minus, 0.0);
        assert_eq!(p.p, 1.0);

        let p = participant_probabilities(MarketCounts { bulls: 100, bears: 0 }).unwrap();
        assert_eq!((p.p_plus, p.p), (1.0, 0.0));

        assert_eq!(
            participant_probabilities(MarketCounts { bulls: 0, bears: 0 }),
            Err(OscillatorError::NoParticipants)
        );
    }

    #[test]
    fn entropy_split_values() {
        let e = std::f64::consts::E;
        let s = entropy_split(0.5 + 0.5 / e, 0.5 - 0.5 / e, 1.0).unwrap();
        assert!((s.informative - 1.0 / e).abs() < 1e-12);
        assert_eq!(s.redundant, 0.0);
        let s = entropy_split(1.0, 0.0, 0.5).unwrap();
        assert_eq!(s.informative, 0.0);
        assert!(matches!(entropy_split(0.4, 0.6, 0.5), Err(OscillatorError::NoImbalance(_))));
        assert!(matches!(entropy_split(0.5, 0.5, 0.5), Err(OscillatorError::NoImbalance(_))));
        let bits = entropy_split(0.75, 0.25, 0.5).unwrap().in_bits();
        assert!((bits.redundant - 0.5).abs() < 1e-12);
    }

    #[test]
    fn shannon_values() {
        assert!((shannon_entropy(&[0.5, 0.5]).unwrap() - std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(shannon_entropy(&[1.0]).unwrap(), 0.0);
        assert_eq!(shannon_entropy(&[1.0, 0.0]).unwrap(), 0.0);
        let h = shannon_entropy(&[0.25, 0.75]).unwrap();
        assert!((h - 0.5623).abs() < 1e-4, "{h}");
        assert!(matches!(
            shannon_entropy(&[0.5, -0.1]),
            Err(OscillatorError::NegativeComponent { index: 1, .. })
        ));
    }

    #[test]
    fn taylor_at_expansion_point() {
        let p0 = [0.3, 0.7];
        let t = entropy_taylor(&p0, &p0).unwrap();
        assert_eq!(t.d_star, 0.0);
        assert!((t.approx_h - shannon_entropy(&p0).unwrap()).abs() < 1e-15);
        let t = entropy_taylor(&[0.6, 0.4], &[0.5, 0.5]).unwrap();
        assert!((t.d_star - 0.02).abs() < 1e-15);
        assert_eq!(
            entropy_taylor(&[0.5, 0.5], &[0.5, 0.0]),
            Err(OscillatorError::ZeroReference { index: 1 })
        );
    }

    #[test]
    fn taylor_remainder_bound() {
        let p0 = [0.3, 0.7];
        for &scale in &[1.0, 0.5, 0.25, -1.0] {
            let d = [0.01 * p0[0] * scale, -0.01 * p0[0] * scale];
            let p = [p0[0] + d[0], p0[1] + d[1]];
            let t = entropy_taylor(&p, &p0).unwrap();
            let h = shannon_entropy(&p).unwrap();
            let max_d = d[0].abs().max(d[1].abs());
            assert!((t.approx_h - h).abs() <= 10.0 * max_d.powi(3));
        }
    }

    #[test]
    fn d_double_star_values() {
        let r = reference();
        assert_eq!(d_double_star(r.state(), &r), 0.0);
        let v = d_double_star(ProbState2::new(0.5, 0.6).unwrap(), &r);
        assert!((v - (0.01 - 0.001 / 1.5)).abs() < 1e-15);
        assert!((v - 0.009_333_333_333_333).abs() < 1e-12);
        let below = ProbState2::new(0.5, 0.4).unwrap();
        let quad = 0.01 / (2.0 * 0.5);
        assert!(d_double_star(below, &r) > quad);
    }

    #[test]
    fn params_and_k_discrepancy() {
        let p = osc_params(&reference());
        assert!((p.chi - 0.04).abs() < 1e-15);
        assert!((p.alpha - 0.5).abs() < 1e-15);
        assert!((p.c1 - 0.375).abs() < 1e-15);
        assert!((p.c2 - 0.5).abs() < 1e-15);
        assert!((p.k - 0.08).abs() < 1e-15);
        assert!((p.k_printed - 0.4).abs() < 1e-15);
        let flipped = osc_params(&ReferenceState::new(0.5, 0.5, -0.1).unwrap());
        assert_eq!(flipped.chi, p.chi);
        assert_eq!(flipped.k, p.k);
    }

    #[test]
    fn reference_is_fixed_point() {
        let r = reference();
        for traj in [
            integrate_harmonic(&r, r.state(), 0.1, 10.0).unwrap(),
            integrate_nonharmonic(&r, r.state(), 0.1, 10.0).unwrap(),
        ] {
            assert!(traj.points.iter().all(|p| p.p1 == 0.5 && p.p2 == 0.5));
        }
    }

    #[test]
    fn harmonic_matches_closed_form() {
        let r = reference();
        let amp = 1e-3;
        let omega = osc_params(&r).chi.sqrt();
        assert!((omega - 0.2).abs() < 1e-15);
        let traj = integrate_harmonic(&r, ProbState2::new(0.5, 0.5 + amp).unwrap(), 0.01, 100.0).unwrap();
        for p in traj.points.iter().step_by(500) {
            let expected = 0.5 + amp * (omega * p.t).cos();
            assert!((p.p2 - expected).abs() < 1e-12, "t = {}", p.t);
        }
    }

    #[test]
    fn escape_is_reported() {
        let r = ReferenceState::new(0.5, 0.2, 0.1).unwrap();
        let err = integrate_nonharmonic(&r, ProbState2::new(0.99, 0.2).unwrap(), 0.1, 10.0).unwrap_err();
        assert!(matches!(err, OscillatorError::EscapedWell { .. }));
        assert!(err.is_numerical());
        let wide = ReferenceState::new(0.5, 0.3, 0.1).unwrap();
        let err = integrate_harmonic(&wide, ProbState2::new(0.5, 0.99).unwrap(), 0.1, 100.0).unwrap_err();
        assert!(matches!(err, OscillatorError::LeftUnitInterval { .. }));
    }

    #[test]
    fn trajectory_csv_header() {
        let r = reference();
        let traj = integrate_nonharmonic(&r, r.state(), 0.5, 1.0).unwrap();
        assert!(traj.to_csv().starts_with("t,p1,p2,d_double_star\n"));
    }
}
