//! Soliton model of market dynamics.
//!
//! The crate is a numerical laboratory around the forced Korteweg–de Vries
//! equation `u_t + 6 u u_x + u_xxx + C = 0`:
//!
//! - [`grid`]: periodic grids, sampled fields, norms and peak detection.
//! - [`oscillator`]: entropy bookkeeping and the entropic harmonic /
//!   non-harmonic oscillator systems.
//! - [`analytic`]: closed-form solitons, soliton trains, forced solitons,
//!   linear and cnoidal waves, Jacobi elliptic functions, synthetic figures.
//! - [`kdv`]: Zabusky–Kruskal and integrating-factor pseudospectral solvers,
//!   conserved quantities, fission and forced-return diagnostics.
//! - [`lattice`]: the non-harmonic oscillator chain and its continuum limit.
//! - [`fib`]: Fibonacci numbers, limit ratios, Miner ratio sets and the
//!   ratio comparison tables.
//! - [`market`]: OHLC ingestion, zigzag swings, price/time projections and
//!   soliton-train template fitting.
//! - [`report`]: SVG charts and run manifests used by the `solitrend` binary.
//!
//! Runnable walkthroughs for each capability live in `examples/`.

pub mod analytic;
pub mod cli;
pub mod fib;
pub mod grid;
pub mod kdv;
pub mod lattice;
pub mod market;
pub mod oscillator;
pub mod report;

mod error;
mod linalg;

pub use error::{Error, Result};
pub use grid::{FieldNorms, Grid1D, Peak, WaveField};
