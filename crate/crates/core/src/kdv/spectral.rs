//! Integrating-factor RK4 in Fourier space.
//!
//! In Fourier variables `û_t = i k³ û − 3 i k (u²)^ − C N δ_k0`. The linear
//! part is propagated exactly by `E = exp(i k³ dt / 2)`; the remainder is
//! stepped with RK4.

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::grid::WaveField;

/// Signed wavenumbers `2π j / L`, Nyquist set to zero.
pub(super) fn wavenumbers(nx: usize, length: f64) -> Vec<f64> {
    let base = 2.0 * std::f64::consts::PI / length;
    (0..nx)
        .map(|j| {
            let s = signed_index(j, nx);
            if 2 * j == nx {
                0.0
            } else {
                base * s as f64
            }
        })
        .collect()
}

fn signed_index(j: usize, nx: usize) -> isize {
    if j <= nx / 2 {
        j as isize
    } else {
        j as isize - nx as isize
    }
}

pub(super) struct SpectralState {
    uhat: Vec<Complex64>,
    e_half: Vec<Complex64>,
    /// `−3 i k dt`, zero above the 2/3 cut.
    g: Vec<Complex64>,
    sink: f64,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    buf: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl SpectralState {
    pub(super) fn new(field: &WaveField, dt: f64, forcing: f64) -> Self {
        let nx = field.grid().nx();
        let k = wavenumbers(nx, field.grid().length());
        let mut planner = FftPlanner::<f64>::new();
        let fwd = planner.plan_fft_forward(nx);
        let inv = planner.plan_fft_inverse(nx);
        let cut = nx as isize / 3;
        let e_half = k
            .iter()
            .map(|&k| Complex64::from_polar(1.0, 0.5 * k * k * k * dt))
            .collect();
        let g = k
            .iter()
            .enumerate()
            .map(|(j, &k)| {
                if signed_index(j, nx).abs() >= cut {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new(0.0, -3.0 * k * dt)
                }
            })
            .collect();
        let mut uhat: Vec<Complex64> = field
            .samples()
            .iter()
            .map(|&u| Complex64::new(u, 0.0))
            .collect();
        let scratch_len = fwd.get_inplace_scratch_len().max(inv.get_inplace_scratch_len());
        let mut scratch = vec![Complex64::new(0.0, 0.0); scratch_len];
        fwd.process_with_scratch(&mut uhat, &mut scratch);
        Self {
            uhat,
            e_half,
            g,
            sink: -forcing * nx as f64 * dt,
            fwd,
            inv,
            buf: vec![Complex64::new(0.0, 0.0); nx],
            scratch,
        }
    }

    /// `dt` times the non-dispersive right-hand side evaluated at `vhat`.
    fn nonlinear(&mut self, vhat: &[Complex64]) -> Vec<Complex64> {
        let n = vhat.len() as f64;
        self.buf.copy_from_slice(vhat);
        self.inv.process_with_scratch(&mut self.buf, &mut self.scratch);
        for c in self.buf.iter_mut() {
            let u = c.re / n;
            *c = Complex64::new(u * u, 0.0);
        }
        self.fwd.process_with_scratch(&mut self.buf, &mut self.scratch);
        let mut out: Vec<Complex64> = self.buf.iter().zip(&self.g).map(|(b, g)| b * g).collect();
        out[0] += self.sink;
        out
    }

    pub(super) fn step(&mut self) -> Vec<f64> {
        let v = self.uhat.clone();
        let e = self.e_half.clone();
        let a = self.nonlinear(&v);
        let arg: Vec<Complex64> = (0..v.len()).map(|j| e[j] * (v[j] + 0.5 * a[j])).collect();
        let b = self.nonlinear(&arg);
        let arg: Vec<Complex64> = (0..v.len()).map(|j| e[j] * v[j] + 0.5 * b[j]).collect();
        let c = self.nonlinear(&arg);
        let arg: Vec<Complex64> = (0..v.len())
            .map(|j| e[j] * e[j] * v[j] + e[j] * c[j])
            .collect();
        let d = self.nonlinear(&arg);
        for j in 0..v.len() {
            let e2 = e[j] * e[j];
            self.uhat[j] = e2 * v[j] + (e2 * a[j] + 2.0 * e[j] * (b[j] + c[j]) + d[j]) / 6.0;
        }
        self.physical()
    }

    fn physical(&mut self) -> Vec<f64> {
        let n = self.uhat.len() as f64;
        self.buf.copy_from_slice(&self.uhat);
        self.inv.process_with_scratch(&mut self.buf, &mut self.scratch);
        self.buf.iter().map(|c| c.re / n).collect()
    }
}
