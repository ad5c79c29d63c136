//! Fibonacci numbers, their limit ratios, the Miner projection ratios and the
//! comparison of Fibonacci series with soliton amplitudes and arrival times.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

/// `0, 1, 1, 2, 3, ...` until the next term would overflow `u64`.
pub fn fibonacci() -> impl Iterator<Item = u64> {
    std::iter::successors(Some((0u64, Some(1u64))), |&(a, b)| {
        b.map(|b| (b, a.checked_add(b)))
    })
    .map(|(a, _)| a)
}

/// The first `count` Fibonacci numbers (at most 94, as many as fit in `u64`).
pub fn fib_numbers(count: usize) -> Vec<u64> {
    fibonacci().take(count).collect()
}

/// `n_{i+k} / n_i`. Negative `k` gives the mirror ratios `n_{i−l} / n_i`.
///
/// Returns `None` when an index falls outside the representable sequence or
/// `n_i = 0`.
pub fn fib_ratio(k: i64, i: usize) -> Option<f64> {
    let j = i as i64 + k;
    if j < 0 {
        return None;
    }
    let top = fibonacci().nth(j as usize)?;
    let bottom = fibonacci().nth(i)?;
    if bottom == 0 {
        return None;
    }
    Some(top as f64 / bottom as f64)
}

/// [`fib_ratio`] for each `k`.
pub fn fib_limit_ratios(ks: &[i64], i: usize) -> Vec<Option<f64>> {
    ks.iter().map(|&k| fib_ratio(k, i)).collect()
}

/// Golden ratio `φ = (1 + √5)/2`, the limit of `n_{i+1}/n_i`.
pub fn golden_ratio() -> f64 {
    0.5 * (1.0 + 5f64.sqrt())
}

/// Miner's projection ratios in percent.
pub const MINER_PERCENT: [u32; 6] = [62, 100, 162, 200, 262, 424];

/// Retracement (mirror) ratios in thousandths.
pub const RETRACEMENT_PERMILLE: [u32; 4] = [382, 500, 618, 1000];

/// `[0.62, 1.00, 1.62, 2.00, 2.62, 4.24]`.
pub fn miner_ratios() -> Vec<f64> {
    MINER_PERCENT.iter().map(|&p| p as f64 / 100.0).collect()
}

/// `[0.382, 0.500, 0.618, 1.000]`.
pub fn retracement_ratios() -> Vec<f64> {
    RETRACEMENT_PERMILLE.iter().map(|&p| p as f64 / 1000.0).collect()
}

/// `100 |a − b| / max(a, b)`.
pub fn percent_difference(a: f64, b: f64) -> f64 {
    let denom = a.abs().max(b.abs());
    if denom == 0.0 {
        return 0.0;
    }
    100.0 * (a - b).abs() / denom
}

fn round_to(x: f64, decimals: i32) -> f64 {
    let s = 10f64.powi(decimals);
    (x * s).round() / s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub index: usize,
    pub reference: f64,
    pub model: Option<f64>,
    /// Max-denominator difference, one decimal.
    pub difference_percent: Option<f64>,
    /// Tabulated reference percentage, when there is one.
    pub printed_percent: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioTable {
    pub title: String,
    pub reference_label: String,
    pub model_label: String,
    pub rows: Vec<RatioRow>,
}

impl RatioTable {
    fn build(
        title: &str,
        reference_label: &str,
        model_label: &str,
        data: &[(f64, Option<f64>, Option<f64>)],
    ) -> Self {
        let rows = data
            .iter()
            .enumerate()
            .map(|(i, &(reference, model, printed))| RatioRow {
                index: i + 1,
                reference,
                model,
                difference_percent: model.map(|m| round_to(percent_difference(reference, m), 1)),
                printed_percent: printed,
            })
            .collect();
        Self {
            title: title.to_string(),
            reference_label: reference_label.to_string(),
            model_label: model_label.to_string(),
            rows,
        }
    }

    /// Largest gap in points between computed and printed percentages.
    pub fn max_printed_gap(&self) -> f64 {
        self.rows
            .iter()
            .filter_map(|r| Some((r.difference_percent? - r.printed_percent?).abs()))
            .fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
        let mut out = format!(
            "no,{},{},difference_percent,printed_percent\n",
            self.reference_label, self.model_label
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r.index,
                r.reference,
                opt(r.model),
                opt(r.difference_percent),
                opt(r.printed_percent)
            );
        }
        out
    }

    /// Aligned plain-text block, blanks shown as `-`.
    pub fn to_text(&self) -> String {
        let opt = |v: Option<f64>, d: usize| v.map(|v| format!("{v:.d$}")).unwrap_or_else(|| "-".into());
        let mut out = format!("{}\n", self.title);
        let _ = writeln!(
            out,
            "{:>3}  {:>18}  {:>18}  {:>14}  {:>8}",
            "no", self.reference_label, self.model_label, "difference (%)", "printed"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:>3}  {:>18}  {:>18}  {:>14}  {:>8}",
                r.index,
                r.reference,
                opt(r.model, 0),
                opt(r.difference_percent, 1),
                opt(r.printed_percent, 1)
            );
        }
        out
    }
}

/// Fibonacci ratios against the published soliton amplitude column.
pub fn table1() -> RatioTable {
    RatioTable::build(
        "Fibonacci ratios and soliton amplitudes",
        "fibonacci_ratio",
        "soliton_amplitude",
        &[
            (1.0, Some(1.0), Some(0.0)),
            (1.62, None, None),
            (2.62, Some(3.0), Some(12.7)),
            (4.24, Some(4.0), Some(5.7)),
            (6.85, Some(6.0), Some(12.4)),
            (11.09, Some(10.0), Some(9.8)),
            (17.94, Some(16.0), Some(10.8)),
        ],
    )
}

/// Fibonacci numbers against the soliton arrival ratios `m²`.
pub fn table2() -> RatioTable {
    RatioTable::build(
        "Fibonacci numbers and soliton time spacing",
        "fibonacci_number",
        "soliton_time_ratio",
        &[
            (1.0, Some(1.0), Some(0.0)),
            (2.0, None, None),
            (3.0, None, None),
            (5.0, Some(4.0), Some(20.0)),
            (8.0, Some(9.0), Some(11.0)),
            (13.0, Some(16.0), Some(19.0)),
            (21.0, Some(25.0), Some(16.0)),
            (34.0, Some(36.0), Some(5.0)),
        ],
    )
}
