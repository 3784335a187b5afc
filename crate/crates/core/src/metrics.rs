//! The OWA operator and the properties of an order-weight vector:
//! orness/andness (risk), normalized entropy (dispersion) and the distance
//! to the uniform vector (trade-off).

use serde::{Deserialize, Serialize};

use crate::error::{OwaError, Result};

/// Allowed deviation of `sum(w)` from 1.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

/// Order weights `w_1..w_n`; `w_1` applies to the smallest criterion value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    /// Validates without renormalizing: weights must be finite, nonnegative
    /// and sum to one within [`WEIGHT_SUM_TOLERANCE`].
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(OwaError::InvalidWeights("empty weight vector".into()));
        }
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !w.is_finite() || **w < 0.0)
        {
            return Err(OwaError::InvalidWeights(format!(
                "weight {} is {w}; weights must be finite and nonnegative",
                i + 1
            )));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(OwaError::InvalidWeights(format!(
                "weights sum to {sum}, expected 1"
            )));
        }
        Ok(Self(weights))
    }

    /// Divides by the sum. Used by the generators, never on caller input.
    pub(crate) fn normalized(mut raw: Vec<f64>) -> Result<Self> {
        let sum: f64 = raw.iter().sum();
        if !(sum.is_finite() && sum > 0.0) {
            return Err(OwaError::Numerical(format!(
                "cannot normalize weights with sum {sum}"
            )));
        }
        raw.iter_mut().for_each(|w| *w /= sum);
        Self::new(raw)
    }

    pub(crate) fn one_hot(n: usize, index: usize) -> Self {
        let mut w = vec![0.0; n];
        w[index] = 1.0;
        Self(w)
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(OwaError::InvalidWeights("empty weight vector".into()));
        }
        Ok(Self(vec![1.0 / n as f64; n]))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn reversed(&self) -> Self {
        Self(self.0.iter().rev().copied().collect())
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl TryFrom<Vec<f64>> for WeightVector {
    type Error = OwaError;

    fn try_from(value: Vec<f64>) -> Result<Self> {
        Self::new(value)
    }
}

impl From<WeightVector> for Vec<f64> {
    fn from(value: WeightVector) -> Self {
        value.0
    }
}

/// Criterion values to aggregate; all finite.
#[derive(Debug, Clone, PartialEq)]
pub struct CriteriaSet(Vec<f64>);

impl CriteriaSet {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(OwaError::Domain("empty criteria set".into()));
        }
        if values.iter().any(|x| !x.is_finite()) {
            return Err(OwaError::Domain("criteria must be finite".into()));
        }
        Ok(Self(values))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Values in ascending order.
    pub fn sorted(&self) -> Vec<f64> {
        let mut sorted = self.0.clone();
        sorted.sort_by(f64::total_cmp);
        sorted
    }
}

/// `sum_i w_i * x_(i)` where `x_(i)` is the i-th smallest criterion.
pub fn owa_aggregate(w: &WeightVector, x: &CriteriaSet) -> Result<f64> {
    if w.len() != x.len() {
        return Err(OwaError::DimensionMismatch {
            expected: w.len(),
            actual: x.len(),
        });
    }
    let sorted = x.sorted();
    let value: f64 = w.as_slice().iter().zip(&sorted).map(|(w, x)| w * x).sum();
    // Rounding can push a convex combination a few ulps past its hull.
    Ok(value.clamp(sorted[0], sorted[sorted.len() - 1]))
}

fn require_pair(w: &WeightVector) -> Result<usize> {
    match w.len() {
        n if n >= 2 => Ok(n),
        n => Err(OwaError::DegenerateDimension(n)),
    }
}

/// `1/(n-1) * sum_i w_i (n - i)`; 1 for the minimum operator.
pub fn andness(w: &WeightVector) -> Result<f64> {
    let n = require_pair(w)?;
    let sum: f64 = w
        .as_slice()
        .iter()
        .enumerate()
        .map(|(i, wi)| wi * (n - 1 - i) as f64)
        .sum();
    Ok(sum / (n - 1) as f64)
}

/// `1 - andness(w)`; 1 for the maximum operator.
pub fn orness(w: &WeightVector) -> Result<f64> {
    andness(w).map(|a| 1.0 - a)
}

/// Normalized Shannon entropy `-sum w_i ln w_i / ln n`, taking `0 ln 0 = 0`.
pub fn dispersion(w: &WeightVector) -> Result<f64> {
    let n = require_pair(w)?;
    let entropy: f64 = w
        .as_slice()
        .iter()
        .filter(|&&wi| wi > 0.0)
        .fold(0.0, |acc, &wi| acc - wi * wi.ln());
    Ok((entropy / (n as f64).ln()).clamp(0.0, 1.0))
}

/// `1 - sqrt(n * sum (w_i - 1/n)^2 / (n - 1))`.
pub fn tradeoff(w: &WeightVector) -> Result<f64> {
    let n = require_pair(w)?;
    let nf = n as f64;
    let ss: f64 = w.as_slice().iter().map(|wi| (wi - 1.0 / nf).powi(2)).sum();
    Ok((1.0 - (nf * ss / (nf - 1.0)).sqrt()).clamp(0.0, 1.0))
}

/// All three properties of a weight vector at once.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightMetrics {
    pub orness: f64,
    pub dispersion: f64,
    pub tradeoff: f64,
}

impl WeightMetrics {
    pub fn of(w: &WeightVector) -> Result<Self> {
        Ok(Self {
            orness: orness(w)?,
            dispersion: dispersion(w)?,
            tradeoff: tradeoff(w)?,
        })
    }
}
