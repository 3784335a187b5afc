//! From a decision point to `n` order weights: calibrate the truncated
//! normal, then sample its density on the grid `(i - 1)/(n - 1)` and
//! normalize. `delta = 0` puts all weight on the grid point nearest `alpha`.

use serde::{Deserialize, Serialize};

use crate::calibrate::{calibrate, parabola_delta_max, CalibrationResult, DecisionPoint};
use crate::error::{OwaError, Result};
use crate::metrics::{WeightMetrics, WeightVector};
use crate::truncnorm::TruncNormSpec;

/// How a weight vector was produced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Generation {
    Calibrated(CalibrationResult),
    /// Point mass at `alpha` (`delta = 0`, or a density too narrow to sample).
    Dirac,
    /// `n = 1`: the single weight is 1.
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationOutcome {
    pub point: DecisionPoint,
    pub weights: WeightVector,
    pub generation: Generation,
    /// Properties of `weights` as generated; `None` when `n = 1`. These
    /// differ from the requested `(alpha, delta)` at small `n`.
    pub achieved: Option<WeightMetrics>,
}

/// Unit weight on the grid point `(i - 1)/(n - 1)` nearest `alpha`; an exact
/// tie goes to the lower index.
pub fn dirac_weights(alpha: f64, n: usize) -> Result<WeightVector> {
    if n < 2 {
        return Err(OwaError::DegenerateDimension(n));
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(OwaError::Domain(format!(
            "alpha must lie in [0, 1], got {alpha}"
        )));
    }
    let last = (n - 1) as f64;
    let index = (0..n)
        .min_by(|&i, &j| {
            let di = (i as f64 / last - alpha).abs();
            let dj = (j as f64 / last - alpha).abs();
            di.total_cmp(&dj).then(i.cmp(&j))
        })
        .expect("n >= 2");
    Ok(WeightVector::one_hot(n, index))
}

/// `w_i = f((i-1)/(n-1)) / sum_k f((k-1)/(n-1))`.
///
/// Evaluated in log space relative to the largest grid value, so a density
/// narrower than the grid spacing degrades to the nearest grid point rather
/// than to `0/0`. If even that fails the Dirac vector at `mu_w` is returned.
pub fn discretize(spec: &TruncNormSpec, n: usize) -> Result<WeightVector> {
    if n < 2 {
        return Err(OwaError::DegenerateDimension(n));
    }
    let last = (n - 1) as f64;
    let logs: Vec<f64> = (0..n).map(|i| spec.ln_pdf(i as f64 / last)).collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !top.is_finite() {
        return dirac_weights(spec.mu_w, n);
    }
    let raw: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
    WeightVector::normalized(raw).or_else(|_| dirac_weights(spec.mu_w, n))
}

/// End-to-end generation. Points the truncated normal cannot realize fail
/// with [`OwaError::Infeasible`], carrying the parabola bound on `delta`.
pub fn generate_weights(p: DecisionPoint, n: usize, epsilon: f64) -> Result<GenerationOutcome> {
    if n == 0 {
        return Err(OwaError::Domain("n must be at least 1".into()));
    }
    if n == 1 {
        return Ok(GenerationOutcome {
            point: p,
            weights: WeightVector::uniform(1)?,
            generation: Generation::Degenerate,
            achieved: None,
        });
    }
    let (weights, generation) = if p.delta() == 0.0 {
        (dirac_weights(p.alpha(), n)?, Generation::Dirac)
    } else {
        let fit = calibrate(p, epsilon)?;
        if !fit.accepted {
            return Err(OwaError::Infeasible {
                alpha: p.alpha(),
                delta: p.delta(),
                delta_max: parabola_delta_max(p.alpha()),
                distance: fit.distance,
            });
        }
        (discretize(&fit.spec, n)?, Generation::Calibrated(fit))
    };
    let achieved = Some(WeightMetrics::of(&weights)?);
    Ok(GenerationOutcome {
        point: p,
        weights,
        generation,
        achieved,
    })
}
