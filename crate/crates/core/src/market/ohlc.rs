use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use chrono::{DateTime, NaiveDate, NaiveDateTime, Utc};
use serde::{Deserialize, Serialize};

use super::MarketError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OhlcBar {
    pub timestamp: DateTime<Utc>,
    pub open: f64,
    pub high: f64,
    pub low: f64,
    pub close: f64,
    pub volume: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PriceSeries {
    pub bars: Vec<OhlcBar>,
}

/// RFC 3339, `YYYY-MM-DD[ T]HH:MM:SS` (read as UTC) or a bare date.
pub fn parse_timestamp(s: &str) -> Option<DateTime<Utc>> {
    let s = s.trim();
    if let Ok(t) = DateTime::parse_from_rfc3339(s) {
        return Some(t.with_timezone(&Utc));
    }
    for fmt in ["%Y-%m-%dT%H:%M:%S", "%Y-%m-%d %H:%M:%S", "%Y-%m-%dT%H:%M"] {
        if let Ok(t) = NaiveDateTime::parse_from_str(s, fmt) {
            return Some(t.and_utc());
        }
    }
    NaiveDate::parse_from_str(s, "%Y-%m-%d")
        .ok()
        .and_then(|d| d.and_hms_opt(0, 0, 0))
        .map(|t| t.and_utc())
}

#[derive(Debug, Deserialize)]
struct Row {
    timestamp: String,
    open: f64,
    high: f64,
    low: f64,
    close: f64,
    #[serde(default)]
    volume: Option<f64>,
}

/// Reads `timestamp,open,high,low,close,volume` CSV. Rows may arrive in any
/// order; the result is sorted by time.
pub fn load_ohlc<R: Read>(source: R) -> Result<PriceSeries, MarketError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(source);
    let mut rows: Vec<(u64, OhlcBar)> = Vec::new();
    for record in reader.deserialize::<Row>() {
        let row = record.map_err(|e| MarketError::Malformed {
            line: e.position().map(|p| p.line()).unwrap_or(0),
            message: match e.kind() {
                csv::ErrorKind::Deserialize { err, .. } => err.to_string(),
                _ => e.to_string(),
            },
        })?;
        let line = rows.len() as u64 + 2;
        let timestamp = parse_timestamp(&row.timestamp).ok_or_else(|| MarketError::Malformed {
            line,
            message: format!("unparseable timestamp `{}`", row.timestamp),
        })?;
        let finite = [row.open, row.high, row.low, row.close]
            .iter()
            .all(|v| v.is_finite());
        if !finite || row.volume.is_some_and(|v| !(v.is_finite() && v >= 0.0)) {
            return Err(MarketError::Malformed {
                line,
                message: "prices must be finite and volume non-negative".into(),
            });
        }
        let ordered = row.low <= row.open.min(row.close) && row.open.max(row.close) <= row.high;
        if !ordered {
            return Err(MarketError::OhlcViolation {
                line,
                open: row.open,
                high: row.high,
                low: row.low,
                close: row.close,
            });
        }
        rows.push((
            line,
            OhlcBar {
                timestamp,
                open: row.open,
                high: row.high,
                low: row.low,
                close: row.close,
                volume: row.volume,
            },
        ));
    }
    if rows.is_empty() {
        return Err(MarketError::Empty);
    }
    rows.sort_by_key(|(_, b)| b.timestamp);
    for w in rows.windows(2) {
        if w[0].1.timestamp == w[1].1.timestamp {
            return Err(MarketError::DuplicateTimestamp {
                line: w[0].0.max(w[1].0),
                timestamp: w[1].1.timestamp.to_rfc3339(),
            });
        }
    }
    Ok(PriceSeries {
        bars: rows.into_iter().map(|(_, b)| b).collect(),
    })
}

pub fn load_ohlc_path(path: &Path) -> Result<PriceSeries, crate::Error> {
    let file = std::fs::File::open(path).map_err(|source| crate::Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(load_ohlc(std::io::BufReader::new(file))?)
}

impl PriceSeries {
    /// Bars with `open = high = low = close = value`, spaced `step_seconds`
    /// apart from `start`.
    pub fn from_closes(closes: &[f64], start: DateTime<Utc>, step_seconds: i64) -> Self {
        let bars = closes
            .iter()
            .enumerate()
            .map(|(i, &c)| OhlcBar {
                timestamp: start + chrono::Duration::seconds(step_seconds * i as i64),
                open: c,
                high: c,
                low: c,
                close: c,
                volume: None,
            })
            .collect();
        Self { bars }
    }

    pub fn len(&self) -> usize {
        self.bars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    pub fn closes(&self) -> Vec<f64> {
        self.bars.iter().map(|b| b.close).collect()
    }

    /// Every price multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        let bars = self
            .bars
            .iter()
            .map(|b| OhlcBar {
                open: b.open * s,
                high: b.high * s,
                low: b.low * s,
                close: b.close * s,
                ..b.clone()
            })
            .collect();
        Self { bars }
    }

    /// Mean bar spacing in seconds; `None` below two bars.
    pub fn bar_seconds(&self) -> Option<f64> {
        let (first, last) = (self.bars.first()?, self.bars.last()?);
        if self.bars.len() < 2 {
            return None;
        }
        let span = (last.timestamp - first.timestamp).num_milliseconds() as f64 / 1000.0;
        Some(span / (self.bars.len() - 1) as f64)
    }

    /// Instant at fractional bar index `x`, extrapolating past either end
    /// with the mean spacing.
    pub fn instant_at(&self, x: f64) -> Option<DateTime<Utc>> {
        let first = self.bars.first()?.timestamp;
        let step = self.bar_seconds().unwrap_or(0.0);
        let n = self.bars.len();
        let i = x.floor();
        if i >= 0.0 && (i as usize) + 1 < n {
            let a = self.bars[i as usize].timestamp;
            let b = self.bars[i as usize + 1].timestamp;
            let ms = (b - a).num_milliseconds() as f64 * (x - i);
            return Some(a + chrono::Duration::milliseconds(ms.round() as i64));
        }
        let ms = (x * step * 1000.0).round() as i64;
        Some(first + chrono::Duration::milliseconds(ms))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("timestamp,open,high,low,close,volume\n");
        for b in &self.bars {
            let vol = b.volume.map(|v| v.to_string()).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                b.timestamp.to_rfc3339(),
                b.open,
                b.high,
                b.low,
                b.close,
                vol
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "timestamp,open,high,low,close,volume\n";

    #[test]
    fn empty_file() {
        assert_eq!(load_ohlc(HEADER.as_bytes()), Err(MarketError::Empty));
        assert_eq!(load_ohlc("".as_bytes()), Err(MarketError::Empty));
    }

    #[test]
    fn three_rows_sorted() {
        let csv = format!(
            "{HEADER}2024-01-03,10,12,9,11,100\n2024-01-01,10,11,9,10,\n2024-01-02T00:00:00Z,10,10.5,9.5,10.2,5\n"
        );
        let s = load_ohlc(csv.as_bytes()).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.closes(), vec![10.0, 10.2, 11.0]);
        assert_eq!(s.bars[0].volume, None);
        assert_eq!(s.bar_seconds(), Some(86400.0));
        let again = load_ohlc(s.to_csv().as_bytes()).unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn bound_violation_names_line() {
        let csv = format!("{HEADER}2024-01-01,10,11,9,10,1\n2024-01-02,10,9,11,10,1\n");
        match load_ohlc(csv.as_bytes()) {
            Err(MarketError::OhlcViolation { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn malformed_and_duplicate() {
        let csv = format!("{HEADER}2024-01-01,10,11,9,abc,1\n");
        assert!(matches!(
            load_ohlc(csv.as_bytes()),
            Err(MarketError::Malformed { line: 2, .. })
        ));
        let csv = format!("{HEADER}yesterday,10,11,9,10,1\n");
        assert!(matches!(load_ohlc(csv.as_bytes()), Err(MarketError::Malformed { .. })));
        let csv = format!("{HEADER}2024-01-01,10,11,9,10,1\n2024-01-01,10,11,9,10,1\n");
        assert!(matches!(
            load_ohlc(csv.as_bytes()),
            Err(MarketError::DuplicateTimestamp { .. })
        ));
    }

    #[test]
    fn instants() {
        let start = parse_timestamp("2020-01-01").unwrap();
        let s = PriceSeries::from_closes(&[1.0, 2.0, 3.0], start, 3600);
        assert_eq!(s.instant_at(1.5).unwrap(), parse_timestamp("2020-01-01T01:30:00").unwrap());
        assert_eq!(s.instant_at(4.0).unwrap(), parse_timestamp("2020-01-01T04:00:00").unwrap());
    }
}
