use serde::{Deserialize, Serialize};

use super::{MarketError, PriceSeries, Swing};
use crate::fib::{MINER_PERCENT, RETRACEMENT_PERMILLE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Retracement,
    #[serde(rename = "app")]
    App,
    Expansion,
    #[serde(rename = "soliton-m2")]
    SolitonM2,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Retracement => "retracement",
            Method::App => "app",
            Method::Expansion => "expansion",
            Method::SolitonM2 => "soliton-m2",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Anchor {
    pub label: String,
    /// Bar index, possibly fractional.
    pub index: f64,
    pub price: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub ratio: f64,
    pub label: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeLevel {
    pub ratio: f64,
    pub label: String,
    /// Bar index.
    pub value: f64,
    pub rounded: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitSummary {
    pub params: Vec<f64>,
    pub residual: f64,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionReport {
    pub method: Method,
    pub anchors: Vec<Anchor>,
    pub levels: Vec<Level>,
    pub times: Vec<TimeLevel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitSummary>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl ProjectionReport {
    fn new(method: Method, anchors: Vec<Anchor>) -> Self {
        Self {
            method,
            anchors,
            levels: Vec::new(),
            times: Vec::new(),
            fit: None,
            warnings: Vec::new(),
        }
    }

    fn push_level(&mut self, ratio: f64, label: String, value: f64) {
        if value.is_finite() && value > 0.0 {
            self.levels.push(Level { ratio, label, value });
        } else {
            self.warnings
                .push(format!("level {label} = {value} is not a positive price; dropped"));
        }
    }

    fn push_time(&mut self, ratio: f64, label: String, value: f64) {
        self.times.push(TimeLevel {
            ratio,
            label,
            value,
            rounded: value.round() as i64,
            timestamp: None,
        });
    }

    pub fn level_values(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.value).collect()
    }

    pub fn time_values(&self) -> Vec<f64> {
        self.times.iter().map(|t| t.value).collect()
    }

    /// Fills wall-clock timestamps for anchors and time levels from `series`.
    pub fn with_calendar(mut self, series: &PriceSeries) -> Self {
        for a in &mut self.anchors {
            a.timestamp = series.instant_at(a.index).map(|t| t.to_rfc3339());
        }
        for t in &mut self.times {
            t.timestamp = series.instant_at(t.value).map(|t| t.to_rfc3339());
        }
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn swing_anchors(swing: &Swing) -> Vec<Anchor> {
    vec![
        Anchor {
            label: "swing start".into(),
            index: swing.start.index as f64,
            price: swing.start.price,
            timestamp: None,
        },
        Anchor {
            label: "swing end".into(),
            index: swing.end.index as f64,
            price: swing.end.price,
            timestamp: None,
        },
    ]
}

fn permille_label(p: u32) -> String {
    format!("{:.1}%", p as f64 / 10.0)
}

/// Mirror levels `end − r·range·direction` for r in 0.382, 0.5, 0.618, 1.
pub fn retracement_levels(swing: &Swing) -> ProjectionReport {
    let mut report = ProjectionReport::new(Method::Retracement, swing_anchors(swing));
    let dir = swing.direction.sign();
    for p in RETRACEMENT_PERMILLE {
        let r = p as f64 / 1000.0;
        report.push_level(r, permille_label(p), swing.end.price - r * swing.price_range * dir);
    }
    report
}

/// Miner levels `anchor + r·range·direction` and times `anchor_index + r·bars`.
pub fn alternate_price_projection(
    swing: &Swing,
    anchor_price: f64,
    anchor_index: usize,
) -> Result<ProjectionReport, MarketError> {
    if !(anchor_price.is_finite() && anchor_price > 0.0) {
        return Err(MarketError::BadAnchor(anchor_price));
    }
    let mut anchors = swing_anchors(swing);
    anchors.push(Anchor {
        label: "projection anchor".into(),
        index: anchor_index as f64,
        price: anchor_price,
        timestamp: None,
    });
    let mut report = ProjectionReport::new(Method::App, anchors);
    miner_projection(&mut report, swing, anchor_price, anchor_index as f64);
    Ok(report)
}

/// Miner levels extended from the swing's own end.
pub fn expansion_levels(swing: &Swing) -> ProjectionReport {
    let mut report = ProjectionReport::new(Method::Expansion, swing_anchors(swing));
    miner_projection(&mut report, swing, swing.end.price, swing.end.index as f64);
    report
}

fn miner_projection(report: &mut ProjectionReport, swing: &Swing, price: f64, index: f64) {
    let dir = swing.direction.sign();
    for p in MINER_PERCENT {
        let r = p as f64 / 100.0;
        report.push_level(r, format!("{p}%"), price + r * swing.price_range * dir);
    }
    for p in MINER_PERCENT {
        let r = p as f64 / 100.0;
        report.push_time(r, format!("{p}%"), index + r * swing.bars as f64);
    }
}

/// First trend swing of a soliton-train projection: tops `base + m²·a1`,
/// times `t0 + m²·t1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolitonAnchor {
    pub base: f64,
    pub a1: f64,
    pub t0: f64,
    pub t1: f64,
}

impl SolitonAnchor {
    /// Top measured from price zero off a trend origin at bar `t0`.
    pub fn new(a1: f64, t0: f64, t1: f64) -> Self {
        Self { base: 0.0, a1, t0, t1 }
    }

    /// Measured from the swing start.
    pub fn from_swing(swing: &Swing) -> Self {
        Self {
            base: swing.start.price,
            a1: swing.price_range * swing.direction.sign(),
            t0: swing.start.index as f64,
            t1: swing.bars as f64,
        }
    }
}

pub fn soliton_projection(
    anchor: &SolitonAnchor,
    horizon_n: u32,
) -> Result<ProjectionReport, MarketError> {
    if !(anchor.a1.is_finite() && anchor.a1 != 0.0) {
        return Err(MarketError::BadAnchor(anchor.a1));
    }
    if !(anchor.t1.is_finite() && anchor.t1 > 0.0) {
        return Err(MarketError::DegenerateSwing(format!("time span {}", anchor.t1)));
    }
    let anchors = vec![
        Anchor {
            label: "trend origin".into(),
            index: anchor.t0,
            price: anchor.base,
            timestamp: None,
        },
        Anchor {
            label: "first top".into(),
            index: anchor.t0 + anchor.t1,
            price: anchor.base + anchor.a1,
            timestamp: None,
        },
    ];
    let mut report = ProjectionReport::new(Method::SolitonM2, anchors);
    for m in 2..=horizon_n {
        let m2 = (m * m) as f64;
        let label = format!("m={m}");
        report.push_level(m2, label.clone(), anchor.base + m2 * anchor.a1);
        report.push_time(m2, label, anchor.t0 + m2 * anchor.t1);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-9)
    }

    #[test]
    fn retracement_up_and_down() {
        let up = Swing::between((0, 100.0), (10, 200.0)).unwrap();
        let r = retracement_levels(&up);
        assert!(close(&r.level_values(), &[161.8, 150.0, 138.2, 100.0]));
        assert_eq!(r.levels[3].value, up.start.price);
        assert_eq!(r.levels[0].label, "38.2%");
        let down = Swing::between((0, 200.0), (10, 100.0)).unwrap();
        let d = retracement_levels(&down);
        for (u, v) in r.levels.iter().zip(&d.levels) {
            assert!((u.value - 150.0 + (v.value - 150.0)).abs() < 1e-9);
        }
    }

    #[test]
    fn app_levels_and_times() {
        let a = Swing::between((0, 400.0), (10, 500.0)).unwrap();
        let r = alternate_price_projection(&a, 500.0, 10).unwrap();
        assert_eq!(r.level_values(), vec![562.0, 600.0, 662.0, 700.0, 762.0, 924.0]);
        let t = &r.times[2];
        assert!((t.value - 26.2).abs() < 1e-12);
        assert_eq!(t.rounded, 26);
        assert!((r.times[2].value - 10.0 - 16.2).abs() < 1e-12);
        assert!(alternate_price_projection(&a, -1.0, 10).is_err());
    }

    #[test]
    fn app_drops_non_positive_levels() {
        let a = Swing::between((0, 200.0), (10, 100.0)).unwrap();
        let r = alternate_price_projection(&a, 150.0, 10).unwrap();
        assert!(r.levels.iter().all(|l| l.value > 0.0));
        assert_eq!(r.level_values(), vec![88.0, 50.0]);
        assert_eq!(r.warnings.len(), 4);
    }

    #[test]
    fn expansion_from_swing_end() {
        let a = Swing::between((5, 100.0), (15, 200.0)).unwrap();
        let r = expansion_levels(&a);
        assert!(close(&r.level_values(), &[262.0, 300.0, 362.0, 400.0, 462.0, 624.0]));
        assert!(close(&r.time_values()[1..2], &[25.0]));
    }

    #[test]
    fn soliton_tops() {
        let r = soliton_projection(&SolitonAnchor::new(850.0, 0.0, 1.0), 4).unwrap();
        assert_eq!(r.levels[0].value, 3400.0);
        assert_eq!(r.time_values(), vec![4.0, 9.0, 16.0]);
        let one = soliton_projection(&SolitonAnchor::new(1.0, 0.0, 1.0), 3).unwrap();
        assert_eq!(one.levels[1].value, 9.0);
        let json = r.to_json();
        assert!(json.contains("\"method\": \"soliton-m2\""));
        let back: ProjectionReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn calendar_timestamps() {
        let start = crate::market::parse_timestamp("2020-01-01").unwrap();
        let s = PriceSeries::from_closes(&[1.0; 5], start, 86400);
        let r = soliton_projection(&SolitonAnchor::new(2.0, 0.0, 1.0), 2)
            .unwrap()
            .with_calendar(&s);
        assert_eq!(r.times[0].timestamp.as_deref(), Some("2020-01-05T00:00:00+00:00"));
    }

    proptest! {
        #[test]
        fn levels_scale_with_prices(p0 in 10.0f64..1000.0, d in 1.0f64..500.0, up in any::<bool>(), s in 0.01f64..100.0) {
            let p1 = if up { p0 + d } else { p0 + d * 0.5 };
            let (a, b) = if up { (p0, p1) } else { (p1, p0) };
            let sw = Swing::between((0, a), (7, b)).unwrap();
            let sw_s = Swing::between((0, a * s), (7, b * s)).unwrap();
            let base = retracement_levels(&sw);
            let scaled = retracement_levels(&sw_s);
            for (x, y) in base.levels.iter().zip(&scaled.levels) {
                prop_assert!((x.value * s - y.value).abs() <= 1e-12 * y.value.abs());
            }
            let base = alternate_price_projection(&sw, b, 7).unwrap();
            let scaled = alternate_price_projection(&sw_s, b * s, 7).unwrap();
            prop_assert_eq!(base.levels.len(), scaled.levels.len());
            for (x, y) in base.levels.iter().zip(&scaled.levels) {
                prop_assert!((x.value * s - y.value).abs() <= 1e-12 * y.value.abs());
            }
        }

        #[test]
        fn power_of_two_scaling_is_exact(p0 in 10.0f64..1000.0, d in 1.0f64..500.0, k in -8i32..8) {
            let s = 2f64.powi(k);
            let sw = Swing::between((0, p0), (3, p0 + d)).unwrap();
            let sw_s = Swing::between((0, p0 * s), (3, (p0 + d) * s)).unwrap();
            let x = expansion_levels(&sw).level_values();
            let y = expansion_levels(&sw_s).level_values();
            for (x, y) in x.iter().zip(&y) {
                prop_assert_eq!(x * s, *y);
            }
        }

        #[test]
        fn soliton_tops_increase(a1 in 0.01f64..1e4, t1 in 0.1f64..1e3, n in 2u32..12) {
            let r = soliton_projection(&SolitonAnchor::new(a1, 0.0, t1), n).unwrap();
            prop_assert!(r.levels.windows(2).all(|w| w[0].value < w[1].value));
            prop_assert!(r.times.windows(2).all(|w| w[0].value < w[1].value));
            prop_assert!(r.levels[0].value > a1);
        }
    }
}
