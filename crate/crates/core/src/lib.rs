//! Ordered weighted averaging (OWA) weights generated from a requested level
//! of risk and trade-off.
//!
//! A decision point `(alpha, delta)` is mapped to target moments of a
//! truncated normal distribution on `[0, 1]`; the parent parameters are
//! recovered with a Nelder-Mead search, and the resulting density is
//! sampled on an even grid to produce `n` order weights.
//!
//! ```
//! use owagen::{generate_weights, DecisionPoint, DEFAULT_EPSILON};
//!
//! let point = DecisionPoint::new(0.5, 0.999).unwrap();
//! let outcome = generate_weights(point, 5, DEFAULT_EPSILON).unwrap();
//! for w in outcome.weights.as_slice() {
//!     assert!((w - 0.2).abs() < 2e-3);
//! }
//! ```

pub mod calibrate;
pub mod error;
pub mod explore;
pub mod generate;
pub mod metrics;
pub mod quadrature;
pub mod special;
pub mod truncnorm;

pub use calibrate::{
    calibrate, distance, is_feasible_parabola, parabola_delta_max, target_moments,
    CalibrationResult, DecisionPoint, DEFAULT_EPSILON, DEFAULT_PARABOLA_SLACK,
};
pub use error::{OwaError, Result};
pub use generate::{dirac_weights, discretize, generate_weights, Generation, GenerationOutcome};
pub use metrics::{
    andness, dispersion, orness, owa_aggregate, tradeoff, CriteriaSet, WeightVector,
};
pub use truncnorm::{truncated_mean, truncated_std, TruncNormSpec};
