//! Zigzag pivots on closing prices.

use serde::{Deserialize, Serialize};

use super::{MarketError, PriceSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PivotKind {
    High,
    Low,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pivot {
    pub index: usize,
    pub price: f64,
    pub kind: PivotKind,
    /// Series endpoints and the unconfirmed running extreme.
    pub provisional: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Up,
    Down,
}

impl Direction {
    pub fn sign(&self) -> f64 {
        match self {
            Direction::Up => 1.0,
            Direction::Down => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwingEnd {
    pub index: usize,
    pub price: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Swing {
    pub start: SwingEnd,
    pub end: SwingEnd,
    pub direction: Direction,
    pub price_range: f64,
    pub bars: usize,
    pub seconds: f64,
}

impl Swing {
    /// Swing between two points on the bar axis; `seconds` is left at 0.
    pub fn between(start: (usize, f64), end: (usize, f64)) -> Result<Self, MarketError> {
        let (i0, p0) = start;
        let (i1, p1) = end;
        if i1 <= i0 || p0 == p1 || !(p0.is_finite() && p1.is_finite()) {
            return Err(MarketError::DegenerateSwing(format!(
                "({i0}, {p0}) → ({i1}, {p1})"
            )));
        }
        Ok(Self {
            start: SwingEnd { index: i0, price: p0 },
            end: SwingEnd { index: i1, price: p1 },
            direction: if p1 > p0 { Direction::Up } else { Direction::Down },
            price_range: (p1 - p0).abs(),
            bars: i1 - i0,
            seconds: 0.0,
        })
    }
}

#[derive(PartialEq)]
enum Trend {
    Unknown,
    Up,
    Down,
}

/// Zigzag pivots: a running extreme is confirmed once price retraces from it
/// by at least `threshold` (a fraction). Endpoints are always reported.
pub fn detect_pivots(series: &PriceSeries, threshold: f64) -> Result<Vec<Pivot>, MarketError> {
    if !(threshold.is_finite() && threshold > 0.0) {
        return Err(MarketError::BadThreshold(threshold));
    }
    let c = series.closes();
    let n = c.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let pivot = |i: usize, kind, provisional| Pivot {
        index: i,
        price: c[i],
        kind,
        provisional,
    };
    let mut out: Vec<Pivot> = Vec::new();
    let mut trend = Trend::Unknown;
    let (mut hi, mut lo) = (0usize, 0usize);
    let mut ext = 0usize;
    for i in 1..n {
        let p = c[i];
        match trend {
            Trend::Unknown => {
                if p >= c[lo] * (1.0 + threshold) {
                    if lo != 0 {
                        out.push(pivot(0, PivotKind::High, true));
                    }
                    out.push(pivot(lo, PivotKind::Low, lo == 0));
                    trend = Trend::Up;
                    ext = i;
                } else if p <= c[hi] * (1.0 - threshold) {
                    if hi != 0 {
                        out.push(pivot(0, PivotKind::Low, true));
                    }
                    out.push(pivot(hi, PivotKind::High, hi == 0));
                    trend = Trend::Down;
                    ext = i;
                } else {
                    if p > c[hi] {
                        hi = i;
                    }
                    if p < c[lo] {
                        lo = i;
                    }
                }
            }
            Trend::Up => {
                if p > c[ext] {
                    ext = i;
                } else if p <= c[ext] * (1.0 - threshold) {
                    out.push(pivot(ext, PivotKind::High, false));
                    trend = Trend::Down;
                    ext = i;
                }
            }
            Trend::Down => {
                if p < c[ext] {
                    ext = i;
                } else if p >= c[ext] * (1.0 + threshold) {
                    out.push(pivot(ext, PivotKind::Low, false));
                    trend = Trend::Up;
                    ext = i;
                }
            }
        }
    }
    let last = n - 1;
    match trend {
        Trend::Unknown => {
            if n == 1 {
                out.push(pivot(0, PivotKind::Low, true));
            } else if c[last] >= c[0] {
                out.push(pivot(0, PivotKind::Low, true));
                out.push(pivot(last, PivotKind::High, true));
            } else {
                out.push(pivot(0, PivotKind::High, true));
                out.push(pivot(last, PivotKind::Low, true));
            }
        }
        Trend::Up | Trend::Down => {
            let (ext_kind, end_kind) = if trend == Trend::Up {
                (PivotKind::High, PivotKind::Low)
            } else {
                (PivotKind::Low, PivotKind::High)
            };
            out.push(pivot(ext, ext_kind, true));
            if ext != last {
                out.push(pivot(last, end_kind, true));
            }
        }
    }
    Ok(out)
}

/// Pivot-to-pivot swings, with wall-clock spans taken from `series`.
pub fn swings(series: &PriceSeries, pivots: &[Pivot]) -> Vec<Swing> {
    pivots
        .windows(2)
        .filter_map(|w| {
            let mut s = Swing::between((w[0].index, w[0].price), (w[1].index, w[1].price)).ok()?;
            let t0 = series.bars.get(w[0].index)?.timestamp;
            let t1 = series.bars.get(w[1].index)?.timestamp;
            s.seconds = (t1 - t0).num_milliseconds() as f64 / 1000.0;
            Some(s)
        })
        .collect()
}
