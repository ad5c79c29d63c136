//! SVG charts, artifact writing and run manifests.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::market::{Method, ProjectionReport};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("nothing to plot: the data is empty")]
    Empty,
    #[error("x and y lengths differ ({x} vs {y})")]
    LengthMismatch { x: usize, y: usize },
    #[error("plot data contains a non-finite value at index {0}")]
    NonFinite(usize),
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot read manifest {path}: {message}")]
    Manifest { path: String, message: String },
}

/// Linear map from data to SVG pixel coordinates (y grows downwards).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartScale {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub width: f64,
    pub height: f64,
    pub margin: f64,
}

impl ChartScale {
    pub const WIDTH: f64 = 800.0;
    pub const HEIGHT: f64 = 450.0;
    pub const MARGIN: f64 = 60.0;

    /// Fits the data ranges. A constant signal is placed on the baseline
    /// of a unit-height range that includes it and zero.
    pub fn fit(x: &[f64], y: &[f64], extra_y: &[f64]) -> Self {
        let (mut x_min, mut x_max) = min_max(x);
        let (mut y_min, mut y_max) = min_max(y.iter().chain(extra_y));
        if x_min == x_max {
            x_min -= 0.5;
            x_max += 0.5;
        }
        if y_min == y_max {
            y_min = y_min.min(0.0);
            y_max = y_max.max(0.0);
            if y_min == y_max {
                y_max = y_min + 1.0;
            }
        }
        Self {
            x_min,
            x_max,
            y_min,
            y_max,
            width: Self::WIDTH,
            height: Self::HEIGHT,
            margin: Self::MARGIN,
        }
    }

    pub fn px(&self, x: f64) -> f64 {
        self.margin + (x - self.x_min) / (self.x_max - self.x_min) * (self.width - 2.0 * self.margin)
    }

    pub fn py(&self, y: f64) -> f64 {
        self.height
            - self.margin
            - (y - self.y_min) / (self.y_max - self.y_min) * (self.height - 2.0 * self.margin)
    }

    /// Inverse of [`ChartScale::py`].
    pub fn data_y(&self, py: f64) -> f64 {
        self.y_min
            + (self.height - self.margin - py) / (self.height - 2.0 * self.margin)
                * (self.y_max - self.y_min)
    }
}

fn min_max<'a>(v: impl IntoIterator<Item = &'a f64>) -> (f64, f64) {
    v.into_iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

/// Roughly `target` round-valued ticks covering `[lo, hi]`.
pub fn nice_ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    let span = hi - lo;
    if !(span > 0.0) || target == 0 {
        return vec![lo];
    }
    let raw = span / target as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlayLine {
    pub label: String,
    pub value: f64,
}

/// Horizontal price levels and vertical time markers drawn over a chart.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Overlay {
    pub levels: Vec<OverlayLine>,
    pub markers: Vec<OverlayLine>,
}

fn method_caption(m: Method) -> &'static str {
    match m {
        Method::Retracement => "retracement",
        Method::App => "APP",
        Method::Expansion => "expansion",
        Method::SolitonM2 => "soliton-m²",
    }
}

impl Overlay {
    pub fn from_report(report: &ProjectionReport) -> Self {
        let caption = method_caption(report.method);
        Self {
            levels: report
                .levels
                .iter()
                .map(|l| OverlayLine {
                    label: format!("{caption} ({})", l.label),
                    value: l.value,
                })
                .collect(),
            markers: report
                .times
                .iter()
                .map(|t| OverlayLine {
                    label: format!("{caption} ({})", t.label),
                    value: t.value,
                })
                .collect(),
        }
    }

    pub fn merge(mut self, other: Overlay) -> Self {
        self.levels.extend(other.levels);
        self.markers.extend(other.markers);
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chart<'a> {
    pub title: &'a str,
    pub x_label: &'a str,
    pub y_label: &'a str,
    pub x: &'a [f64],
    pub y: &'a [f64],
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Self-contained SVG of `chart` with an optional overlay. Returns the
/// document and the scale used.
pub fn emit_svg(chart: &Chart, overlay: Option<&Overlay>) -> Result<(String, ChartScale), ReportError> {
    if chart.y.is_empty() {
        return Err(ReportError::Empty);
    }
    if chart.x.len() != chart.y.len() {
        return Err(ReportError::LengthMismatch {
            x: chart.x.len(),
            y: chart.y.len(),
        });
    }
    if let Some(i) = chart
        .x
        .iter()
        .zip(chart.y)
        .position(|(a, b)| !(a.is_finite() && b.is_finite()))
    {
        return Err(ReportError::NonFinite(i));
    }
    let empty = Overlay::default();
    let overlay = overlay.unwrap_or(&empty);
    let extra: Vec<f64> = overlay.levels.iter().map(|l| l.value).filter(|v| v.is_finite()).collect();
    let s = ChartScale::fit(chart.x, chart.y, &extra);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="11">"#,
        w = s.width,
        h = s.height
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
        s.width / 2.0,
        escape(chart.title)
    );
    let (left, right) = (s.margin, s.width - s.margin);
    let (top, bottom) = (s.margin, s.height - s.margin);
    let _ = writeln!(
        svg,
        r#"<g stroke="black" fill="none"><line class="axis" x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}"/><line class="axis" x1="{left}" y1="{top}" x2="{left}" y2="{bottom}"/></g>"#
    );
    for t in nice_ticks(s.x_min, s.x_max, 8) {
        let x = s.px(t);
        let _ = writeln!(
            svg,
            r#"<line class="tick" x1="{x:.2}" y1="{bottom}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            bottom + 5.0,
            bottom + 18.0,
            fmt_tick(t)
        );
    }
    for t in nice_ticks(s.y_min, s.y_max, 6) {
        let y = s.py(t);
        let _ = writeln!(
            svg,
            r#"<line class="tick" x1="{:.2}" y1="{y:.2}" x2="{left}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            left - 5.0,
            left - 8.0,
            y + 4.0,
            fmt_tick(t)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        s.width / 2.0,
        s.height - 15.0,
        escape(chart.x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="15" y="{}" text-anchor="middle" transform="rotate(-90 15 {})">{}</text>"#,
        s.height / 2.0,
        s.height / 2.0,
        escape(chart.y_label)
    );
    let mut points = String::new();
    for (x, y) in chart.x.iter().zip(chart.y) {
        let _ = write!(points, "{:.3},{:.3} ", s.px(*x), s.py(*y));
    }
    let _ = writeln!(
        svg,
        r#"<polyline class="data" fill="none" stroke="steelblue" stroke-width="1.5" points="{}"/>"#,
        points.trim_end()
    );
    for l in &overlay.levels {
        let y = s.py(l.value);
        let _ = writeln!(
            svg,
            r#"<line class="level" x1="{left}" y1="{y:.3}" x2="{right}" y2="{y:.3}" stroke="firebrick" stroke-dasharray="6 3"/><text class="level-label" x="{:.2}" y="{:.2}" fill="firebrick">{}</text>"#,
            left + 4.0,
            y - 3.0,
            escape(&l.label)
        );
    }
    for m in &overlay.markers {
        if m.value < s.x_min || m.value > s.x_max {
            continue;
        }
        let x = s.px(m.value);
        let _ = writeln!(
            svg,
            r#"<line class="marker" x1="{x:.3}" y1="{top}" x2="{x:.3}" y2="{bottom}" stroke="darkgreen" stroke-dasharray="2 3"/><text class="marker-label" x="{:.2}" y="{:.2}" fill="darkgreen">{}</text>"#,
            x + 3.0,
            top + 12.0,
            escape(&m.label)
        );
    }
    svg.push_str("</svg>\n");
    Ok((svg, s))
}

fn fmt_tick(t: f64) -> String {
    let r = (t * 1e6).round() / 1e6;
    if r == 0.0 {
        "0".into()
    } else {
        format!("{r}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn digest_file(path: &Path) -> Result<FileDigest, ReportError> {
    let bytes = std::fs::read(path).map_err(|source| ReportError::Write {
        path: path.display().to_string(),
        source,
    })?;
    Ok(FileDigest {
        path: path.display().to_string(),
        sha256: sha256_hex(&bytes),
    })
}

/// Writes artifacts into one directory and remembers their digests.
#[derive(Debug)]
pub struct ArtifactWriter {
    dir: PathBuf,
    written: Vec<FileDigest>,
}

impl ArtifactWriter {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self, ReportError> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir).map_err(|source| ReportError::Write {
            path: dir.display().to_string(),
            source,
        })?;
        Ok(Self {
            dir,
            written: Vec::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn write(&mut self, name: &str, content: &str) -> Result<PathBuf, ReportError> {
        let path = self.dir.join(name);
        std::fs::write(&path, content).map_err(|source| ReportError::Write {
            path: path.display().to_string(),
            source,
        })?;
        self.written.push(FileDigest {
            path: name.to_string(),
            sha256: sha256_hex(content.as_bytes()),
        });
        Ok(path)
    }

    pub fn outputs(&self) -> &[FileDigest] {
        &self.written
    }
}

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Arguments after the program name, enough to replay the run.
    pub argv: Vec<String>,
    pub parameters: serde_json::Value,
    pub seed: Option<u64>,
    pub versions: BTreeMap<String, String>,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub wall_time_seconds: f64,
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl RunManifest {
    pub fn read(path: &Path) -> Result<Self, ReportError> {
        let text = std::fs::read_to_string(path).map_err(|e| ReportError::Manifest {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        serde_json::from_str(&text).map_err(|e| ReportError::Manifest {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf, ReportError> {
        let path = dir.join(MANIFEST_FILE);
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::create_dir_all(dir)
            .and_then(|_| std::fs::write(&path, text + "\n"))
            .map_err(|source| ReportError::Write {
                path: path.display().to_string(),
                source,
            })?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{soliton, SolitonParam};
    use crate::market::{soliton_projection, SolitonAnchor};

    fn polyline_points(svg: &str) -> Vec<(f64, f64)> {
        let start = svg.find("points=\"").unwrap() + 8;
        let end = start + svg[start..].find('"').unwrap();
        svg[start..end]
            .split_whitespace()
            .map(|p| {
                let (a, b) = p.split_once(',').unwrap();
                (a.parse().unwrap(), b.parse().unwrap())
            })
            .collect()
    }

    #[test]
    fn zero_field_is_flat_on_baseline() {
        let x: Vec<f64> = (0..50).map(|i| i as f64).collect();
        let y = vec![0.0; 50];
        let chart = Chart { title: "zero", x_label: "x", y_label: "u", x: &x, y: &y };
        let (svg, s) = emit_svg(&chart, None).unwrap();
        let pts = polyline_points(&svg);
        assert_eq!(pts.len(), 50);
        let baseline = s.height - s.margin;
        assert!(pts.iter().all(|p| (p.1 - baseline).abs() < 1e-9));
    }

    #[test]
    fn soliton_peak_maps_back_to_amplitude() {
        let p = SolitonParam::new(1.5, 0.0, 0.0).unwrap();
        let x: Vec<f64> = (0..401).map(|i| -10.0 + i as f64 * 0.05).collect();
        let y: Vec<f64> = x.iter().map(|&x| soliton(&p, x, 0.0)).collect();
        let chart = Chart { title: "soliton", x_label: "x", y_label: "u", x: &x, y: &y };
        let (svg, s) = emit_svg(&chart, None).unwrap();
        let top = polyline_points(&svg)
            .into_iter()
            .map(|p| p.1)
            .fold(f64::INFINITY, f64::min);
        assert!((s.data_y(top) - 2.0 * 1.5f64.powi(2)).abs() < 1e-2);
    }

    #[test]
    fn soliton_level_overlay() {
        let r = soliton_projection(&SolitonAnchor::new(850.0, 0.0, 5.0), 2).unwrap();
        let overlay = Overlay::from_report(&r);
        let x: Vec<f64> = (0..30).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 800.0 + 10.0 * v).collect();
        let chart = Chart { title: "t", x_label: "bar", y_label: "price", x: &x, y: &y };
        let (svg, s) = emit_svg(&chart, Some(&overlay)).unwrap();
        assert_eq!(svg.matches("class=\"level\"").count(), 1);
        assert!(svg.contains(">soliton-m² (m=2)<"));
        assert!(s.y_max >= 3400.0);
        assert_eq!(svg.matches("class=\"marker\"").count(), 1);
    }

    #[test]
    fn rejects_bad_data() {
        let chart = Chart { title: "", x_label: "", y_label: "", x: &[], y: &[] };
        assert!(matches!(emit_svg(&chart, None), Err(ReportError::Empty)));
        let chart = Chart { title: "", x_label: "", y_label: "", x: &[0.0], y: &[f64::NAN] };
        assert!(matches!(emit_svg(&chart, None), Err(ReportError::NonFinite(0))));
    }

    #[test]
    fn ticks_are_round() {
        assert_eq!(nice_ticks(0.0, 10.0, 5), vec![0.0, 2.0, 4.0, 6.0, 8.0, 10.0]);
        assert_eq!(nice_ticks(-0.3, 0.3, 3), vec![-0.2, 0.0, 0.2]);
    }

    #[test]
    fn artifacts_and_manifest_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let mut w = ArtifactWriter::new(dir.path().join("run")).unwrap();
        w.write("a.csv", "x\n1\n").unwrap();
        assert_eq!(w.outputs()[0].sha256, sha256_hex(b"x\n1\n"));
        let d = digest_file(&w.dir().join("a.csv")).unwrap();
        assert_eq!(d.sha256, w.outputs()[0].sha256);
        let m = RunManifest {
            command: "tables".into(),
            argv: vec!["tables".into()],
            parameters: serde_json::json!({}),
            seed: None,
            versions: BTreeMap::new(),
            inputs: vec![],
            outputs: w.outputs().to_vec(),
            wall_time_seconds: 0.1,
            status: "ok".into(),
            error: None,
        };
        let p = m.write(w.dir()).unwrap();
        assert_eq!(RunManifest::read(&p).unwrap(), m);
    }
}
