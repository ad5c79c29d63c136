//! Synthetic soliton charts: resolved trains laid out on a periodic line.
//!
//! | figure | content |
//! |---|---|
//! | 2 | one two-soliton train, amplitudes 0.5 and 2 |
//! | 3 | one three-soliton train, amplitudes 0.5, 2 and 4.5 |
//! | 4 | figure 3 with its 4.5 pulse merged with a 2.25 pulse |
//! | 5 | three two-soliton trains with first-order amplitudes 8, 8.82, 9.68, offset by 1 in time |

use serde::{Deserialize, Serialize};

use super::{merge_amplitude, sech2, AnalyticError, OffsetTrain, TrainSpec};
use crate::grid::{find_peaks, Grid1D, WaveField};

pub const FIGURES: [u8; 4] = [2, 3, 4, 5];

/// One resolved pulse `A sech²(√(A/2)(x − position))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pulse {
    pub label: String,
    pub amplitude: f64,
    pub position: f64,
}

impl Pulse {
    pub fn kappa(&self) -> f64 {
        (0.5 * self.amplitude).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Figure {
    pub number: u8,
    pub title: String,
    /// Evaluation time of the trains.
    pub time: f64,
    pub trains: Vec<OffsetTrain>,
    pub pulses: Vec<Pulse>,
    pub field: WaveField,
}

impl Figure {
    /// Value of the charted superposition at `x`.
    pub fn value(&self, x: f64) -> f64 {
        let grid = self.field.grid();
        self.pulses
            .iter()
            .map(|p| {
                let k = p.kappa();
                p.amplitude * sech2(k * grid.displacement(p.position, x))
            })
            .sum()
    }

    /// Chart value at every pulse crest, in pulse order.
    pub fn crest_heights(&self) -> Vec<f64> {
        self.pulses.iter().map(|p| self.value(p.position)).collect()
    }

    /// Crest heights as detected on the sampled chart.
    pub fn sampled_peaks(&self) -> Vec<f64> {
        let min = 0.01 * self.field.norms().linf;
        let mut peaks = find_peaks(&self.field, min);
        peaks.sort_by(|a, b| a.position.total_cmp(&b.position));
        peaks.into_iter().map(|p| p.height).collect()
    }
}

fn resolve(trains: &[OffsetTrain], t: f64) -> Vec<Pulse> {
    let mut pulses = Vec::new();
    for (j, tr) in trains.iter().enumerate() {
        let tau = t - tr.time_offset;
        for m in 1..=tr.spec.n {
            let member = tr.spec.member(m);
            pulses.push(Pulse {
                label: format!("train {} m={m}", j + 1),
                amplitude: member.amplitude(),
                position: member.center + member.peak_offset(tau),
            });
        }
    }
    pulses
}

fn build(
    number: u8,
    title: &str,
    trains: Vec<OffsetTrain>,
    time: f64,
    grid: Grid1D,
    edit: impl FnOnce(&mut Vec<Pulse>) -> Result<(), AnalyticError>,
) -> Result<Figure, AnalyticError> {
    let mut pulses = resolve(&trains, time);
    edit(&mut pulses)?;
    let mut fig = Figure {
        number,
        title: title.to_string(),
        time,
        trains,
        pulses,
        field: WaveField::zeros(grid, time),
    };
    let samples: Vec<f64> = grid.points().map(|x| fig.value(x)).collect();
    fig.field = WaveField::new(grid, samples, time)?;
    Ok(fig)
}

fn single(n: u32, kappa: f64, center: f64) -> Result<Vec<OffsetTrain>, AnalyticError> {
    Ok(vec![OffsetTrain {
        spec: TrainSpec::new(n, kappa, center, 0.0)?,
        time_offset: 0.0,
    }])
}

/// Builds one of the synthetic charts.
pub fn figure(number: u8) -> Result<Figure, AnalyticError> {
    match number {
        2 => build(
            2,
            "two-soliton solution",
            single(2, 0.5, 4.0)?,
            10.0,
            Grid1D::new(64.0, 2048)?,
            |_| Ok(()),
        ),
        3 => build(
            3,
            "three-soliton solution",
            single(3, 0.5, 8.0)?,
            10.0,
            Grid1D::new(128.0, 4096)?,
            |_| Ok(()),
        ),
        4 => build(
            4,
            "three-soliton solution with a merged crest",
            single(3, 0.5, 8.0)?,
            10.0,
            Grid1D::new(128.0, 4096)?,
            |pulses| {
                let last = pulses.last_mut().expect("three pulses");
                last.amplitude = merge_amplitude(last.amplitude, 2.25)?;
                last.label = "merged (4.5, 2.25)".to_string();
                Ok(())
            },
        ),
        5 => {
            let trains = [8.0, 8.82, 9.68]
                .iter()
                .enumerate()
                .map(|(j, &a1)| {
                    Ok(OffsetTrain {
                        spec: TrainSpec::new(2, (0.5_f64 * a1).sqrt(), 4.0, 0.0)?,
                        time_offset: j as f64,
                    })
                })
                .collect::<Result<Vec<_>, AnalyticError>>()?;
            build(
                5,
                "mix of three two-soliton solutions",
                trains,
                3.0,
                Grid1D::new(256.0, 16384)?,
                |_| Ok(()),
            )
        }
        other => Err(AnalyticError::UnknownFigure(other)),
    }
}

pub fn all_figures() -> Result<Vec<Figure>, AnalyticError> {
    FIGURES.iter().map(|&n| figure(n)).collect()
}
