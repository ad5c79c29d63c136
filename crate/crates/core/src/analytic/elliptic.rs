//! Jacobi elliptic functions by the arithmetic–geometric mean.

use serde::{Deserialize, Serialize};

use super::AnalyticError;

const AGM_TOL: f64 = 1e-14;
const MAX_LANDEN: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JacobiValues {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

fn check_m(m: f64) -> Result<(), AnalyticError> {
    if (0.0..=1.0).contains(&m) {
        Ok(())
    } else {
        Err(AnalyticError::BadModulus(m))
    }
}

/// `sn, cn, dn` of `u` with parameter `m` (`k² = m`).
///
/// Descending Landen recursion: run the AGM of `(1, √(1−m))` keeping the
/// `c_n/a_n` ratios, then unwind the amplitude `φ_N = 2^N a_N u` back to `φ_0`.
pub fn jacobi_elliptic(u: f64, m: f64) -> Result<JacobiValues, AnalyticError> {
    check_m(m)?;
    if m == 0.0 {
        return Ok(JacobiValues {
            sn: u.sin(),
            cn: u.cos(),
            dn: 1.0,
        });
    }
    if m == 1.0 {
        let sech = 1.0 / u.cosh();
        return Ok(JacobiValues {
            sn: u.tanh(),
            cn: sech,
            dn: sech,
        });
    }
    let mut a = 1.0;
    let mut b = (1.0 - m).sqrt();
    let mut c = m.sqrt();
    let mut ratios = [0.0_f64; MAX_LANDEN + 1];
    let mut n = 0;
    ratios[0] = c / a;
    while c.abs() > AGM_TOL && n < MAX_LANDEN {
        let a_next = 0.5 * (a + b);
        let b_next = (a * b).sqrt();
        c = 0.5 * (a - b);
        a = a_next;
        b = b_next;
        n += 1;
        ratios[n] = c / a;
    }
    let mut phi = 2f64.powi(n as i32) * a * u;
    for j in (1..=n).rev() {
        phi = 0.5 * (phi + (ratios[j] * phi.sin()).asin());
    }
    let sn = phi.sin();
    let cn = phi.cos();
    let dn = (1.0 - m * sn * sn).sqrt();
    Ok(JacobiValues { sn, cn, dn })
}

/// Complete elliptic integral of the first kind, `K(m) = π / (2 AGM(1, √(1−m)))`.
pub fn complete_elliptic_k(m: f64) -> Result<f64, AnalyticError> {
    check_m(m)?;
    if m == 1.0 {
        return Ok(f64::INFINITY);
    }
    let mut a = 1.0_f64;
    let mut b = (1.0 - m).sqrt();
    for _ in 0..MAX_LANDEN {
        if (a - b).abs() <= AGM_TOL * a {
            break;
        }
        let a_next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = a_next;
    }
    Ok(std::f64::consts::FRAC_PI_2 / a)
}
