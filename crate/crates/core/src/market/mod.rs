//! Price-series analysis: OHLC ingestion, zigzag swings, ratio projections
//! and soliton-train template fitting.
//!
//! Time is measured in bar indices throughout; wall-clock instants appear
//! only when a report is rendered against a concrete series.

mod fit;
mod ohlc;
mod pivots;
mod projection;

use thiserror::Error;

pub use fit::{
    fit_soliton_train, ratio_scorecard, synthetic_series, FitOptions, FitResult, FitStatus,
    PulseFit, RatioScore, Scorecard, SyntheticPulse, Trend, FLAG_PERCENT,
};
pub use ohlc::{load_ohlc, load_ohlc_path, parse_timestamp, OhlcBar, PriceSeries};
pub use pivots::{detect_pivots, swings, Direction, Pivot, PivotKind, Swing};
pub use projection::{
    alternate_price_projection, expansion_levels, retracement_levels, soliton_projection,
    Anchor, FitSummary, Level, Method, ProjectionReport, SolitonAnchor, TimeLevel,
};

#[derive(Debug, Error, PartialEq)]
pub enum MarketError {
    #[error("price series is empty")]
    Empty,
    #[error("line {line}: {message}")]
    Malformed { line: u64, message: String },
    #[error("line {line}: OHLC bounds violated (low {low}, open {open}, close {close}, high {high})")]
    OhlcViolation {
        line: u64,
        open: f64,
        high: f64,
        low: f64,
        close: f64,
    },
    #[error("line {line}: duplicate timestamp {timestamp}")]
    DuplicateTimestamp { line: u64, timestamp: String },
    #[error("zigzag threshold must be a positive fraction, got {0}")]
    BadThreshold(f64),
    #[error("swing has no extent: {0}")]
    DegenerateSwing(String),
    #[error("anchor price must be finite and positive, got {0}")]
    BadAnchor(f64),
    #[error("scorecard needs at least two pulses, got {0}")]
    TooFewPulses(usize),
    #[error("cannot fit: {0}")]
    BadFitInput(String),
}
