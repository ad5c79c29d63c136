//! Uniform periodic 1-D grids and the fields sampled on them.

use std::fmt::Write as _;
use std::io::BufRead;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GridError {
    #[error("grid needs at least 8 points, got {0}")]
    TooFewPoints(usize),
    #[error("grid length must be finite and positive, got {0}")]
    BadLength(f64),
    #[error("profile is not finite at x = {x} (value {value})")]
    NonFinite { x: f64, value: f64 },
    #[error("expected {expected} samples, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("field csv line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Periodic grid on `[0, length)` with `nx` equally spaced points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    length: f64,
    nx: usize,
}

impl Grid1D {
    pub fn new(length: f64, nx: usize) -> Result<Self, GridError> {
        if nx < 8 {
            return Err(GridError::TooFewPoints(nx));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(GridError::BadLength(length));
        }
        Ok(Self { length, nx })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn dx(&self) -> f64 {
        self.length / self.nx as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.dx()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.nx).map(move |i| self.x(i))
    }

    /// Index arithmetic modulo `nx`.
    pub fn wrap(&self, i: isize) -> usize {
        i.rem_euclid(self.nx as isize) as usize
    }

    /// Maps a position into `[0, length)`.
    pub fn wrap_position(&self, x: f64) -> f64 {
        let w = x.rem_euclid(self.length);
        // rem_euclid can return `length` itself for tiny negative inputs
        if w >= self.length {
            0.0
        } else {
            w
        }
    }

    /// Shortest signed periodic displacement from `from` to `to`, in `(-L/2, L/2]`.
    pub fn displacement(&self, from: f64, to: f64) -> f64 {
        let half = 0.5 * self.length;
        let mut d = (to - from).rem_euclid(self.length);
        if d > half {
            d -= self.length;
        }
        d
    }
}

/// Real field sampled on a periodic grid at a given time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveField {
    grid: Grid1D,
    samples: Vec<f64>,
    time: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldNorms {
    pub l2: f64,
    pub linf: f64,
}

/// Local maximum with a parabolically refined position and height.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub position: f64,
    pub height: f64,
    pub index: usize,
}

impl WaveField {
    pub fn new(grid: Grid1D, samples: Vec<f64>, time: f64) -> Result<Self, GridError> {
        if samples.len() != grid.nx() {
            return Err(GridError::LengthMismatch {
                expected: grid.nx(),
                got: samples.len(),
            });
        }
        if let Some((i, &v)) = samples.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(GridError::NonFinite { x: grid.x(i), value: v });
        }
        Ok(Self { grid, samples, time })
    }

    pub fn zeros(grid: Grid1D, time: f64) -> Self {
        Self {
            grid,
            samples: vec![0.0; grid.nx()],
            time,
        }
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn with_time(mut self, time: f64) -> Self {
        self.time = time;
        self
    }

    /// Periodic shift by `k` grid points: new[i] = old[i - k].
    pub fn shifted(&self, k: isize) -> Self {
        let n = self.grid.nx();
        let samples = (0..n)
            .map(|i| self.samples[self.grid.wrap(i as isize - k)])
            .collect();
        Self {
            grid: self.grid,
            samples,
            time: self.time,
        }
    }

    pub fn norms(&self) -> FieldNorms {
        field_norms(self)
    }

    /// Refined peak around sample `i` (need not be a strict maximum).
    pub fn refine_peak(&self, i: usize) -> Peak {
        let ii = i as isize;
        let left = self.samples[self.grid.wrap(ii - 1)];
        let mid = self.samples[i];
        let right = self.samples[self.grid.wrap(ii + 1)];
        let (offset, height) = parabolic_vertex(left, mid, right);
        Peak {
            position: self.grid.wrap_position((i as f64 + offset) * self.grid.dx()),
            height,
            index: i,
        }
    }

    /// The global maximum, refined. Useful when the field sits on a negative
    /// background and `find_peaks` thresholds would not apply.
    pub fn global_peak(&self) -> Peak {
        let (i, _) = self
            .samples
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, &v)| {
                if v > best.1 {
                    (i, v)
                } else {
                    best
                }
            });
        self.refine_peak(i)
    }

    /// Two-column `x,value` CSV preceded by a `# t=<time>` comment line.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.samples.len() * 32);
        let _ = writeln!(out, "# t={}", self.time);
        out.push_str("x,value\n");
        for (x, v) in self.grid.points().zip(&self.samples) {
            let _ = writeln!(out, "{x},{v}");
        }
        out
    }

    /// Parses the format written by [`WaveField::to_csv`]. The grid length is
    /// recovered as `nx * dx` from the first two abscissae.
    pub fn from_csv<R: BufRead>(reader: R) -> Result<Self, GridError> {
        let mut time = 0.0;
        let mut xs = Vec::new();
        let mut values = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line_no = lineno + 1;
            let line = line.map_err(|e| GridError::Parse {
                line: line_no,
                message: e.to_string(),
            })?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(t) = rest.trim().strip_prefix("t=") {
                    time = t.trim().parse().map_err(|_| GridError::Parse {
                        line: line_no,
                        message: format!("bad time stamp `{t}`"),
                    })?;
                }
                continue;
            }
            if line.starts_with("x,") {
                continue;
            }
            let mut parts = line.split(',');
            let parse = |s: Option<&str>| -> Result<f64, GridError> {
                s.and_then(|s| s.trim().parse().ok()).ok_or_else(|| GridError::Parse {
                    line: line_no,
                    message: "expected two numeric columns".into(),
                })
            };
            xs.push(parse(parts.next())?);
            values.push(parse(parts.next())?);
        }
        if xs.len() < 2 {
            return Err(GridError::TooFewPoints(xs.len()));
        }
        let dx = xs[1] - xs[0];
        let grid = Grid1D::new(dx * xs.len() as f64, xs.len())?;
        WaveField::new(grid, values, time)
    }
}

/// Vertex of the parabola through `(-1, l), (0, c), (1, r)`: `(offset, height)`.
pub(crate) fn parabolic_vertex(l: f64, c: f64, r: f64) -> (f64, f64) {
    let curvature = l - 2.0 * c + r;
    if curvature >= 0.0 || !curvature.is_finite() {
        return (0.0, c);
    }
    let offset = 0.5 * (l - r) / curvature;
    let offset = offset.clamp(-1.0, 1.0);
    let height = c - 0.25 * (l - r) * offset;
    (offset, height)
}

/// Samples `f` at every grid point.
pub fn sample_profile<F>(f: F, grid: Grid1D, time: f64) -> Result<WaveField, GridError>
where
    F: Fn(f64) -> f64,
{
    let mut samples = Vec::with_capacity(grid.nx());
    for x in grid.points() {
        let value = f(x);
        if !value.is_finite() {
            return Err(GridError::NonFinite { x, value });
        }
        samples.push(value);
    }
    Ok(WaveField { grid, samples, time })
}

/// All periodic local maxima above `min_height`, sorted by descending height.
///
/// A sample is a maximum when it is strictly above its left neighbour and not
/// below its right one, so flat tops are reported once.
pub fn find_peaks(field: &WaveField, min_height: f64) -> Vec<Peak> {
    let s = field.samples();
    let grid = field.grid();
    let mut peaks: Vec<Peak> = (0..grid.nx())
        .filter(|&i| {
            let l = s[grid.wrap(i as isize - 1)];
            let r = s[grid.wrap(i as isize + 1)];
            s[i] > min_height && s[i] > l && s[i] >= r
        })
        .map(|i| field.refine_peak(i))
        .collect();
    peaks.sort_by(|a, b| b.height.total_cmp(&a.height).then(a.index.cmp(&b.index)));
    peaks
}

/// `find_peaks` with the default threshold of 1% of the maximum magnitude.
pub fn find_peaks_default(field: &WaveField) -> Vec<Peak> {
    let linf = field.norms().linf;
    if linf == 0.0 {
        return Vec::new();
    }
    find_peaks(field, 0.01 * linf)
}

pub fn field_norms(field: &WaveField) -> FieldNorms {
    let dx = field.grid().dx();
    let sum_sq: f64 = field.samples().iter().map(|v| v * v).sum();
    let linf = field.samples().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    FieldNorms {
        l2: (sum_sq * dx).sqrt(),
        linf,
    }
}
