//! Latin hypercube sampling of the unit square.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calibrate::DecisionPoint;
use crate::error::{OwaError, Result};

/// `n_samples` decision points with exactly one `alpha` and one `delta`
/// coordinate in each of the `n_samples` equal-width bins of `[0, 1)`.
/// The output is a pure function of `(n_samples, seed)`.
pub fn latin_hypercube(n_samples: usize, seed: u64) -> Result<Vec<DecisionPoint>> {
    if n_samples == 0 {
        return Err(OwaError::Domain("n_samples must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut strata = || {
        let mut perm: Vec<usize> = (0..n_samples).collect();
        perm.shuffle(&mut rng);
        perm.into_iter()
            .map(|bin| (bin as f64 + rng.random::<f64>()) / n_samples as f64)
            .collect::<Vec<f64>>()
    };
    let alphas = strata();
    let deltas = strata();
    alphas
        .into_iter()
        .zip(deltas)
        .map(|(a, d)| DecisionPoint::new(a.min(1.0), d.min(1.0)))
        .collect()
}
