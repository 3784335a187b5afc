//! Metric grids over the `(alpha, delta)` lattice for a fixed number of
//! criteria.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::calibrate::{calibrate, DecisionPoint};
use crate::error::{OwaError, Result};
use crate::generate::discretize;
use crate::metrics::{dispersion, orness, tradeoff, WeightVector};
use crate::truncnorm::TruncNormSpec;

pub const MIN_RESOLUTION: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Orness,
    Dispersion,
    Tradeoff,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Orness, Metric::Dispersion, Metric::Tradeoff];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Orness => "orness",
            Metric::Dispersion => "dispersion",
            Metric::Tradeoff => "tradeoff",
        }
    }

    pub fn evaluate(self, w: &WeightVector) -> Result<f64> {
        match self {
            Metric::Orness => orness(w),
            Metric::Dispersion => dispersion(w),
            Metric::Tradeoff => tradeoff(w),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = OwaError;

    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| OwaError::Domain(format!("unknown metric {s:?}")))
    }
}

/// Cell centers `(i + 1/2) / resolution`. An odd resolution puts a cell on
/// `alpha = 0.5`, and the lattice is closed under `alpha -> 1 - alpha`.
pub fn lattice_axis(resolution: usize) -> Vec<f64> {
    (0..resolution)
        .map(|i| (2 * i + 1) as f64 / (2 * resolution) as f64)
        .collect()
}

/// Calibrated parent normals on the lattice, shared by every `n` and metric.
#[derive(Debug, Clone)]
pub struct Lattice {
    resolution: usize,
    axis: Vec<f64>,
    // alpha-major; None where calibration rejects the point
    cells: Vec<Option<TruncNormSpec>>,
}

impl Lattice {
    pub fn calibrate(resolution: usize, epsilon: f64) -> Result<Self> {
        if resolution < MIN_RESOLUTION {
            return Err(OwaError::Domain(format!(
                "resolution must be at least {MIN_RESOLUTION}, got {resolution}"
            )));
        }
        let axis = lattice_axis(resolution);
        let cells = (0..resolution * resolution)
            .into_par_iter()
            .map(|k| {
                let p = DecisionPoint::new(axis[k / resolution], axis[k % resolution])?;
                let fit = calibrate(p, epsilon)?;
                Ok(fit.accepted.then_some(fit.spec))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            resolution,
            axis,
            cells,
        })
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn axis(&self) -> &[f64] {
        &self.axis
    }

    pub fn feasible_count(&self) -> usize {
        self.cells.iter().flatten().count()
    }

    pub fn grid(&self, n: usize, metric: Metric) -> Result<SensitivityGrid> {
        if n < 2 {
            return Err(OwaError::DegenerateDimension(n));
        }
        let values = self
            .cells
            .par_iter()
            .map(|cell| match cell {
                Some(spec) => Ok(Some(metric.evaluate(&discretize(spec, n)?)?)),
                None => Ok(None),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SensitivityGrid {
            n,
            metric,
            axis: self.axis.clone(),
            values,
        })
    }
}

/// A metric of the generated weights over the lattice. Infeasible cells
/// hold `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityGrid {
    pub n: usize,
    pub metric: Metric,
    pub axis: Vec<f64>,
    pub values: Vec<Option<f64>>,
}

impl SensitivityGrid {
    pub fn resolution(&self) -> usize {
        self.axis.len()
    }

    /// Value at `alpha = axis[i]`, `delta = axis[j]`.
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.values[i * self.resolution() + j]
    }

    /// Cells as `(alpha, delta, value)` in alpha-major order.
    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, Option<f64>)> + '_ {
        let r = self.resolution();
        self.values
            .iter()
            .enumerate()
            .map(move |(k, v)| (self.axis[k / r], self.axis[k % r], *v))
    }

    /// Largest violation of the mirror relation between cells `(i, j)` and
    /// `(r - 1 - i, j)`: `g + g' = 1` for orness, `g = g'` otherwise. Cells
    /// feasible on one side only count as infinite.
    pub fn mirror_error(&self) -> f64 {
        let r = self.resolution();
        let mut worst = 0.0f64;
        for i in 0..r {
            for j in 0..r {
                let gap = match (self.get(i, j), self.get(r - 1 - i, j)) {
                    (Some(g), Some(m)) => match self.metric {
                        Metric::Orness => (g + m - 1.0).abs(),
                        _ => (g - m).abs(),
                    },
                    (None, None) => 0.0,
                    _ => f64::INFINITY,
                };
                worst = worst.max(gap);
            }
        }
        worst
    }
}

/// One grid, calibrating its own lattice. Use [`Lattice`] directly to share
/// calibrations across several `n` or metrics.
pub fn sensitivity_grid(
    n: usize,
    metric: Metric,
    resolution: usize,
    epsilon: f64,
) -> Result<SensitivityGrid> {
    Lattice::calibrate(resolution, epsilon)?.grid(n, metric)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calibrate::DEFAULT_EPSILON;

    #[test]
    fn axis_is_cell_centered_and_mirrored() {
        let axis = lattice_axis(10);
        assert_eq!(axis[0], 0.05);
        assert_eq!(axis[9], 0.95);
        for (a, b) in axis.iter().zip(axis.iter().rev()) {
            assert!((a + b - 1.0).abs() < 1e-15);
        }
        assert_eq!(lattice_axis(11)[5], 0.5);
    }

    #[test]
    fn metric_names_round_trip() {
        for m in Metric::ALL {
            assert_eq!(m.to_string().parse::<Metric>().unwrap(), m);
        }
        assert_eq!("Dispersion".parse::<Metric>().unwrap(), Metric::Dispersion);
        assert!("entropy".parse::<Metric>().is_err());
    }

    #[test]
    fn low_resolution_rejected() {
        assert!(sensitivity_grid(5, Metric::Orness, 9, DEFAULT_EPSILON).is_err());
    }

    #[test]
    fn grid_values_and_symmetry() {
        let lattice = Lattice::calibrate(11, DEFAULT_EPSILON).unwrap();
        assert!(lattice.feasible_count() > 0);
        for n in [2, 5] {
            for m in Metric::ALL {
                let g = lattice.grid(n, m).unwrap();
                assert_eq!(g.values.len(), 121);
                assert!(g
                    .values
                    .iter()
                    .flatten()
                    .all(|v| (0.0..=1.0 + 1e-12).contains(v)));
                assert!(g.mirror_error() < 1e-6, "{m} n={n}: {}", g.mirror_error());
            }
        }
        // Corner cells above the frontier are infeasible.
        assert!(lattice
            .grid(5, Metric::Orness)
            .unwrap()
            .get(0, 10)
            .is_none());
        let center = lattice
            .grid(5, Metric::Dispersion)
            .unwrap()
            .get(5, 10)
            .unwrap();
        assert!(center > 0.99, "{center}");
    }
}
