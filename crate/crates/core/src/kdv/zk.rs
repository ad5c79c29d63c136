//! Zabusky–Kruskal leapfrog.

use crate::grid::WaveField;

pub(super) struct ZkState {
    prev: Vec<f64>,
    cur: Vec<f64>,
    next: Vec<f64>,
    dt: f64,
    dx: f64,
    forcing: f64,
    started: bool,
}

/// `−(6 u u_x + u_xxx)` with the averaged nonlinearity
/// `2 (u_{i+1} + u_i + u_{i−1})(u_{i+1} − u_{i−1}) / (2dx)`.
fn rhs(u: &[f64], dx: f64, forcing: f64, out: &mut [f64]) {
    let n = u.len();
    let a = 1.0 / dx;
    let b = 1.0 / (2.0 * dx * dx * dx);
    for i in 0..n {
        let m2 = u[(i + n - 2) % n];
        let m1 = u[(i + n - 1) % n];
        let p1 = u[(i + 1) % n];
        let p2 = u[(i + 2) % n];
        let nonlinear = a * (p1 + u[i] + m1) * (p1 - m1);
        let dispersive = b * (p2 - 2.0 * p1 + 2.0 * m1 - m2);
        out[i] = -nonlinear - dispersive - forcing;
    }
}

impl ZkState {
    pub(super) fn new(field: &WaveField, dt: f64, forcing: f64) -> Self {
        let cur = field.samples().to_vec();
        let n = cur.len();
        Self {
            prev: vec![0.0; n],
            cur,
            next: vec![0.0; n],
            dt,
            dx: field.grid().dx(),
            forcing,
            started: false,
        }
    }

    pub(super) fn step(&mut self) -> Vec<f64> {
        if !self.started {
            // midpoint startup
            let mut k = vec![0.0; self.cur.len()];
            rhs(&self.cur, self.dx, self.forcing, &mut k);
            let half: Vec<f64> = self
                .cur
                .iter()
                .zip(&k)
                .map(|(u, k)| u + 0.5 * self.dt * k)
                .collect();
            rhs(&half, self.dx, self.forcing, &mut k);
            for ((n, u), k) in self.next.iter_mut().zip(&self.cur).zip(&k) {
                *n = u + self.dt * k;
            }
            self.started = true;
        } else {
            rhs(&self.cur, self.dx, self.forcing, &mut self.next);
            for (n, p) in self.next.iter_mut().zip(&self.prev) {
                *n = p + 2.0 * self.dt * *n;
            }
        }
        std::mem::swap(&mut self.prev, &mut self.cur);
        std::mem::swap(&mut self.cur, &mut self.next);
        self.cur.clone()
    }
}
