//! The decision-space experiments: sampled sweeps, the rejected fraction as
//! a function of `epsilon`, the fitted feasibility frontier, and metric
//! grids over `(alpha, delta)`.

mod grid;
mod lhs;
mod output;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::calibrate::{calibrate, DecisionPoint};
use crate::error::{OwaError, Result};

pub use grid::{lattice_axis, sensitivity_grid, Lattice, Metric, SensitivityGrid, MIN_RESOLUTION};
pub use lhs::latin_hypercube;
pub use output::{
    grid_file_name, write_epsilon_curve_csv, write_grid_csv, write_sweep_csv, EPSILON_CURVE_FILE,
    SWEEP_FILE,
};

pub const DEFAULT_SAMPLES: usize = 2000;
pub const PAPER_SAMPLES: usize = 10_000;
pub const DEFAULT_RESOLUTION: usize = 41;
pub const FRONTIER_BINS: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub point: DecisionPoint,
    pub distance: f64,
    pub accepted: bool,
}

/// Calibrates every point (in parallel; output order follows `points`).
/// `delta = 0` is realized exactly by the Dirac weights and gets distance 0.
pub fn sweep(points: &[DecisionPoint], epsilon: f64) -> Result<Vec<SweepRecord>> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(OwaError::Domain(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    points
        .par_iter()
        .map(|&point| {
            let distance = if point.delta() == 0.0 {
                0.0
            } else {
                calibrate(point, epsilon)?.distance
            };
            Ok(SweepRecord {
                point,
                distance,
                accepted: distance < epsilon,
            })
        })
        .collect()
}

/// `count` values spaced evenly in log10 between `lo` and `hi`.
pub fn log_space(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.log10(), hi.log10());
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count)
            .map(|i| 10f64.powf(a + (b - a) * i as f64 / (count - 1) as f64))
            .collect(),
    }
}

/// 30 thresholds from `1e-12` to `1e-1`.
pub fn default_epsilons() -> Vec<f64> {
    log_space(1e-12, 1e-1, 30)
}

/// Point of the rejected-fraction curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub epsilon: f64,
    pub rejected_fraction: f64,
}

fn check_epsilons(epsilons: &[f64]) -> Result<()> {
    if epsilons.iter().any(|e| e.is_nan() || *e <= 0.0) || epsilons.windows(2).any(|w| w[0] > w[1])
    {
        return Err(OwaError::Domain(
            "epsilons must be positive and ascending".into(),
        ));
    }
    Ok(())
}

/// Fraction of records with `distance >= epsilon`, for each epsilon. Only
/// the stored distances are used; nothing is recalibrated.
pub fn epsilon_curve(records: &[SweepRecord], epsilons: &[f64]) -> Result<Vec<CurvePoint>> {
    check_epsilons(epsilons)?;
    if records.is_empty() {
        return Err(OwaError::InsufficientData("no sweep records".into()));
    }
    let total = records.len() as f64;
    Ok(epsilons
        .iter()
        .map(|&epsilon| CurvePoint {
            epsilon,
            rejected_fraction: records.iter().filter(|r| r.distance >= epsilon).count() as f64
                / total,
        })
        .collect())
}

/// Calibrates `samples` once, then evaluates the curve at each epsilon.
pub fn epsilon_sweep(samples: &[DecisionPoint], epsilons: &[f64]) -> Result<Vec<CurvePoint>> {
    check_epsilons(epsilons)?;
    // Acceptance is recomputed per threshold, so the sweep's own epsilon
    // only seeds the search's restart decision.
    let reference = epsilons.first().copied().unwrap_or(crate::DEFAULT_EPSILON);
    epsilon_curve(&sweep(samples, reference)?, epsilons)
}

/// `delta = a alpha^2 + b alpha + c` fitted to the per-bin frontier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontierFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub rmse: f64,
    /// `(alpha, delta)` of the highest accepted record in each nonempty bin.
    pub frontier: Vec<(f64, f64)>,
}

impl FrontierFit {
    pub fn eval(&self, alpha: f64) -> f64 {
        (self.a * alpha + self.b) * alpha + self.c
    }
}

/// Splits `alpha` into [`FRONTIER_BINS`] equal bins, keeps the accepted
/// record with the largest `delta` in each, and fits a parabola through
/// those points by least squares.
pub fn fit_frontier(records: &[SweepRecord]) -> Result<FrontierFit> {
    let mut top: [Option<(f64, f64)>; FRONTIER_BINS] = [None; FRONTIER_BINS];
    for r in records.iter().filter(|r| r.accepted) {
        let (a, d) = (r.point.alpha(), r.point.delta());
        let bin = ((a * FRONTIER_BINS as f64) as usize).min(FRONTIER_BINS - 1);
        if top[bin].is_none_or(|(_, best)| d > best) {
            top[bin] = Some((a, d));
        }
    }
    let frontier: Vec<(f64, f64)> = top.into_iter().flatten().collect();
    if frontier.len() < 3 {
        return Err(OwaError::InsufficientData(format!(
            "{} nonempty frontier bins, need 3",
            frontier.len()
        )));
    }
    let design = DMatrix::from_fn(frontier.len(), 3, |i, j| frontier[i].0.powi(2 - j as i32));
    let target = DVector::from_iterator(frontier.len(), frontier.iter().map(|p| p.1));
    let coef = design
        .clone()
        .svd(true, true)
        .solve(&target, 1e-14)
        .map_err(|e| OwaError::Numerical(e.to_string()))?;
    let residual = design * &coef - target;
    Ok(FrontierFit {
        a: coef[0],
        b: coef[1],
        c: coef[2],
        rmse: (residual.norm_squared() / frontier.len() as f64).sqrt(),
        frontier,
    })
}
