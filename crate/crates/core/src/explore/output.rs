//! CSV files written by the experiments.

use std::io::Write;

use serde::Serialize;

use super::grid::{Metric, SensitivityGrid};
use super::{CurvePoint, SweepRecord};
use crate::error::{OwaError, Result};

pub const SWEEP_FILE: &str = "sweep.csv";
pub const EPSILON_CURVE_FILE: &str = "epsilon_curve.csv";

/// `grid_<metric>_n<k>.csv`
pub fn grid_file_name(metric: Metric, n: usize) -> String {
    format!("grid_{metric}_n{n}.csv")
}

#[derive(Serialize)]
struct SweepRow {
    alpha: f64,
    delta: f64,
    distance: f64,
    accepted: bool,
}

#[derive(Serialize)]
struct GridRow {
    alpha: f64,
    delta: f64,
    value: Option<f64>,
    feasible: bool,
}

fn io_error(e: csv::Error) -> OwaError {
    OwaError::Io(e.to_string())
}

fn write_rows<W: Write, R: Serialize>(out: W, rows: impl Iterator<Item = R>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(io_error)?;
    }
    w.flush().map_err(|e| OwaError::Io(e.to_string()))
}

/// Header `alpha,delta,distance,accepted`.
pub fn write_sweep_csv<W: Write>(out: W, records: &[SweepRecord]) -> Result<()> {
    write_rows(
        out,
        records.iter().map(|r| SweepRow {
            alpha: r.point.alpha(),
            delta: r.point.delta(),
            distance: r.distance,
            accepted: r.accepted,
        }),
    )
}

/// Header `epsilon,rejected_fraction`.
pub fn write_epsilon_curve_csv<W: Write>(out: W, curve: &[CurvePoint]) -> Result<()> {
    write_rows(out, curve.iter())
}

/// Header `alpha,delta,value,feasible`; `value` is empty where infeasible.
pub fn write_grid_csv<W: Write>(out: W, grid: &SensitivityGrid) -> Result<()> {
    write_rows(
        out,
        grid.cells().map(|(alpha, delta, value)| GridRow {
            alpha,
            delta,
            value,
            feasible: value.is_some(),
        }),
    )
}
