//! Periodic travelling waves of `P_t + P P_x + P_xxx + C = 0`.
//!
//! A profile `f(x − vt)` satisfies `f′² = −f³/3 + v f² + a f + b`. With the
//! cubic's roots `f1 ≤ f2 ≤ f3` the bounded solution oscillates in `[f2, f3]`:
//!
//! `f(ξ) = f2 + (f3 − f2) cn²(Δξ | m)`, `m = (f3 − f2)/(f3 − f1)`,
//! `Δ = √((f3 − f1)/12)`.

use serde::{Deserialize, Serialize};

use super::{complete_elliptic_k, jacobi_elliptic, AnalyticError};

/// Coefficient of `C t²` in the boosted argument `x − vt + βCt²`. With the
/// unit nonlinear coefficient the forced residual vanishes exactly at ½.
pub const DEFAULT_BOOST: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CnoidalParams {
    pub v: f64,
    pub a: f64,
    pub b: f64,
    /// Roots in ascending order.
    pub roots: [f64; 3],
    pub m: f64,
}

impl CnoidalParams {
    /// Solves `f³ − 3v f² − 3a f − 3b = 0` by the trigonometric method.
    pub fn new(v: f64, a: f64, b: f64) -> Result<Self, AnalyticError> {
        if !(v.is_finite() && a.is_finite() && b.is_finite()) {
            return Err(AnalyticError::ComplexRoots {
                discriminant: f64::NAN,
            });
        }
        // depressed cubic t³ + p t + q with f = t + v
        let (c2, c1, c0) = (-3.0 * v, -3.0 * a, -3.0 * b);
        let shift = -c2 / 3.0;
        let p = c1 - c2 * c2 / 3.0;
        let q = 2.0 * c2.powi(3) / 27.0 - c2 * c1 / 3.0 + c0;
        let discriminant = -(4.0 * p.powi(3) + 27.0 * q * q);
        let scale = (p.abs().powi(3) + q * q).max(f64::MIN_POSITIVE);
        if discriminant < -1e-12 * scale {
            return Err(AnalyticError::ComplexRoots { discriminant });
        }
        let mut roots = if p.abs() < 1e-300 {
            [shift; 3]
        } else {
            let r = 2.0 * (-p / 3.0).sqrt();
            let arg = (3.0 * q / (p * r)).clamp(-1.0, 1.0);
            let theta = arg.acos() / 3.0;
            let third = 2.0 * std::f64::consts::PI / 3.0;
            [0.0, 1.0, 2.0].map(|k| shift + r * (theta - k * third).cos())
        };
        roots.sort_by(f64::total_cmp);
        Ok(Self::assemble(v, a, b, roots))
    }

    /// Builds the parameters whose cubic vanishes at the given oscillation
    /// bounds (`lower, upper`) and the third root `f1 ≤ lower`.
    pub fn from_roots(f1: f64, f2: f64, f3: f64) -> Result<Self, AnalyticError> {
        let mut roots = [f1, f2, f3];
        if roots.iter().any(|r| !r.is_finite()) {
            return Err(AnalyticError::ComplexRoots {
                discriminant: f64::NAN,
            });
        }
        roots.sort_by(f64::total_cmp);
        let [r1, r2, r3] = roots;
        let v = (r1 + r2 + r3) / 3.0;
        let a = -(r1 * r2 + r1 * r3 + r2 * r3) / 3.0;
        let b = r1 * r2 * r3 / 3.0;
        Ok(Self::assemble(v, a, b, roots))
    }

    fn assemble(v: f64, a: f64, b: f64, roots: [f64; 3]) -> Self {
        let [f1, f2, f3] = roots;
        let m = if f3 > f1 {
            ((f3 - f2) / (f3 - f1)).clamp(0.0, 1.0)
        } else {
            0.0
        };
        Self { v, a, b, roots, m }
    }

    /// Wavenumber-like scale `Δ` multiplying the travelling coordinate.
    pub fn delta(&self) -> f64 {
        ((self.roots[2] - self.roots[0]) / 12.0).sqrt()
    }

    /// Spatial period `2K(m)/Δ`; infinite for the solitary limit.
    pub fn period(&self) -> f64 {
        let d = self.delta();
        if d == 0.0 {
            return f64::INFINITY;
        }
        match complete_elliptic_k(self.m) {
            Ok(k) => 2.0 * k / d,
            Err(_) => f64::INFINITY,
        }
    }

    /// Right-hand side of `f′² = −f³/3 + v f² + a f + b`.
    pub fn cubic(&self, f: f64) -> f64 {
        -f * f * f / 3.0 + self.v * f * f + self.a * f + self.b
    }

    /// Stationary profile `f(ξ)`.
    pub fn profile(&self, xi: f64) -> f64 {
        let [_, f2, f3] = self.roots;
        let cn = jacobi_elliptic(self.delta() * xi, self.m)
            .map(|j| j.cn)
            .unwrap_or(1.0);
        f2 + (f3 - f2) * cn * cn
    }

    /// `f(x − vt + βCt²) − Ct` for an arbitrary boost coefficient `β`.
    pub fn boosted(&self, forcing: f64, boost: f64, x: f64, t: f64) -> f64 {
        self.profile(x - self.v * t + boost * forcing * t * t) - forcing * t
    }
}

/// Forced cnoidal wave with the default boost coefficient.
pub fn cnoidal(params: &CnoidalParams, forcing: f64, x: f64, t: f64) -> f64 {
    params.boosted(forcing, DEFAULT_BOOST, x, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d1<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
        (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
    }

    fn d3<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
        (f(x - 3.0 * h) - 8.0 * f(x - 2.0 * h) + 13.0 * f(x - h) - 13.0 * f(x + h)
            + 8.0 * f(x + 2.0 * h)
            - f(x + 3.0 * h))
            / (8.0 * h * h * h)
    }

    #[test]
    fn roots_round_trip() {
        let p = CnoidalParams::from_roots(-1.0, 0.5, 2.0).unwrap();
        let q = CnoidalParams::new(p.v, p.a, p.b).unwrap();
        for (r, s) in p.roots.iter().zip(&q.roots) {
            assert!((r - s).abs() < 1e-12);
        }
        for r in q.roots {
            assert!(q.cubic(r).abs() < 1e-12);
        }
        assert!((q.m - 1.5 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn complex_roots_rejected() {
        // f³ − 3f² + 3f − 1 + 3 has one real root
        let err = CnoidalParams::new(1.0, -1.0, -2.0 / 3.0).unwrap_err();
        assert!(matches!(err, AnalyticError::ComplexRoots { discriminant } if discriminant < 0.0));
    }

    #[test]
    fn profile_satisfies_first_integral() {
        let p = CnoidalParams::from_roots(-0.3, 0.2, 1.7).unwrap();
        let period = p.period();
        let h = 1e-3;
        for i in 0..200 {
            let xi = period * i as f64 / 200.0;
            let fp = d1(|s| p.profile(s), xi, h);
            let res = fp * fp - p.cubic(p.profile(xi));
            assert!(res.abs() < 1e-9, "ξ={xi} residual={res}");
        }
    }

    #[test]
    fn profile_is_periodic() {
        let p = CnoidalParams::from_roots(-2.0, 0.1, 1.0).unwrap();
        let period = p.period();
        for i in 0..50 {
            let xi = 0.37 * i as f64;
            assert!((p.profile(xi) - p.profile(xi + period)).abs() < 1e-9);
        }
        assert!((p.profile(0.0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn forced_wave_solves_unit_equation() {
        let p = CnoidalParams::from_roots(-0.5, 0.0, 1.2).unwrap();
        let c = 0.3;
        let h = 2e-3;
        for &(x, t) in &[(0.4, 0.2), (2.0, 1.0), (-3.0, 1.7)] {
            let u = cnoidal(&p, c, x, t);
            let ut = d1(|s| cnoidal(&p, c, x, s), t, h);
            let ux = d1(|s| cnoidal(&p, c, s, t), x, h);
            let uxxx = d3(|s| cnoidal(&p, c, s, t), x, h);
            let res = ut + u * ux + uxxx + c;
            assert!(res.abs() < 1e-6, "residual {res} at ({x},{t})");
        }
        // any other boost leaves a residual of order C
        let wrong = |x: f64, t: f64| p.boosted(c, 3.0, x, t);
        let (x, t) = (2.0, 1.0);
        let u = wrong(x, t);
        let res = d1(|s| wrong(x, s), t, h)
            + u * d1(|s| wrong(s, t), x, h)
            + d3(|s| wrong(s, t), x, h)
            + c;
        assert!(res.abs() > 1e-3);
    }

    #[test]
    fn solitary_limit() {
        // f1 = f2 = 0: sech² pulse of height f3 and Δ = √(f3/12)
        let p = CnoidalParams::from_roots(0.0, 0.0, 3.0).unwrap();
        assert_eq!(p.m, 1.0);
        assert!(p.period().is_infinite());
        let d = p.delta();
        for &xi in &[0.0, 0.5, 2.0] {
            let s = 1.0 / (d * xi).cosh();
            assert!((p.profile(xi) - 3.0 * s * s).abs() < 1e-14);
        }
        let near = CnoidalParams::from_roots(-1e-9, 0.0, 3.0).unwrap();
        assert!((near.profile(1.0) - p.profile(1.0)).abs() < 1e-6);
    }

    #[test]
    fn stationary_when_unforced_at_origin() {
        let p = CnoidalParams::from_roots(-1.0, 0.0, 1.0).unwrap();
        for &x in &[0.0, 0.7, 3.1] {
            assert_eq!(cnoidal(&p, 0.0, x, 0.0), p.profile(x));
        }
    }
}
