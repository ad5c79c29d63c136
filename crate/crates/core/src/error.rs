use thiserror::Error;

use crate::analytic::AnalyticError;
use crate::grid::GridError;
use crate::kdv::SolverError;
use crate::lattice::LatticeError;
use crate::market::MarketError;
use crate::oscillator::OscillatorError;
use crate::report::ReportError;

/// Crate-wide error. Each module keeps its own variant set; this type only
/// aggregates them and classifies failures for exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Oscillator(#[from] OscillatorError),
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Market(#[from] MarketError),
    #[error(transparent)]
    Report(#[from] ReportError),
    #[error("{0}")]
    Invalid(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// True for failures of a numerical run (blow-up, escaped orbit, missing
    /// return, ...) as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Solver(e) => e.is_numerical(),
            Error::Oscillator(e) => e.is_numerical(),
            Error::Lattice(e) => e.is_numerical(),
            _ => false,
        }
    }
}
