//! Recovering the parent normal whose truncation to `[0, 1]` has a requested
//! mean and standard deviation.
//!
//! A decision point `(alpha, delta)` asks for truncated moments
//! `(alpha, delta / (2 sqrt 3))`. The search runs Nelder-Mead over
//! `(mu, ln sigma)` inside a fixed box and minimizes the Euclidean distance
//! in moment space; the point is accepted when that distance drops below
//! `epsilon`.

pub mod simplex;

use serde::{Deserialize, Serialize};

use crate::error::{OwaError, Result};
use crate::truncnorm::{TruncNormSpec, UNIFORM_STD};

pub use simplex::{nelder_mead, SimplexConfig, SimplexOutcome};

/// Acceptance threshold on the moment distance.
pub const DEFAULT_EPSILON: f64 = 1e-8;
pub const DEFAULT_PARABOLA_SLACK: f64 = 0.02;

/// Search box for the parent mean.
pub const MU_RANGE: (f64, f64) = (-5.0, 6.0);
/// Search box for the parent standard deviation.
pub const SIGMA_RANGE: (f64, f64) = (1e-6, 1e3);

const MIN_START_SIGMA: f64 = 1e-4;
const RESTART: (f64, f64) = (0.5, 0.15);
const INITIAL_STEPS: [f64; 2] = [0.1, 0.5];

/// Requested risk `alpha` and trade-off `delta`, both in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPoint")]
pub struct DecisionPoint {
    alpha: f64,
    delta: f64,
}

#[derive(Deserialize)]
struct RawPoint {
    alpha: f64,
    delta: f64,
}

impl TryFrom<RawPoint> for DecisionPoint {
    type Error = OwaError;

    fn try_from(raw: RawPoint) -> Result<Self> {
        Self::new(raw.alpha, raw.delta)
    }
}

impl DecisionPoint {
    pub fn new(alpha: f64, delta: f64) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("delta", delta)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(OwaError::Domain(format!(
                    "{name} must lie in [0, 1], got {v}"
                )));
            }
        }
        Ok(Self { alpha, delta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn mirrored(&self) -> Self {
        Self {
            alpha: 1.0 - self.alpha,
            delta: self.delta,
        }
    }
}

/// Truncated moments `(mu_w, sigma_w)` that realize a decision point.
pub fn target_moments(p: DecisionPoint) -> (f64, f64) {
    (p.alpha, p.delta * UNIFORM_STD)
}

/// Euclidean distance between two `(mean, std)` pairs.
pub fn distance(target: (f64, f64), candidate: (f64, f64)) -> f64 {
    (target.0 - candidate.0).hypot(target.1 - candidate.1)
}

/// Upper edge of the decision-strategy space, `4 alpha (1 - alpha)`.
pub fn parabola_delta_max(alpha: f64) -> f64 {
    4.0 * alpha * (1.0 - alpha)
}

/// Cheap feasibility screen against the parabolic frontier. Not an
/// acceptance test: [`calibrate`] decides.
pub fn is_feasible_parabola(p: DecisionPoint, slack: f64) -> bool {
    p.delta <= parabola_delta_max(p.alpha) + slack
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationResult {
    pub spec: TruncNormSpec,
    pub distance: f64,
    pub accepted: bool,
    pub iterations: usize,
    pub function_evals: usize,
}

fn in_box(mu: f64, ln_sigma: f64) -> bool {
    (MU_RANGE.0..=MU_RANGE.1).contains(&mu)
        && (SIGMA_RANGE.0.ln()..=SIGMA_RANGE.1.ln()).contains(&ln_sigma)
}

fn moment_gap(target: (f64, f64), mu: f64, ln_sigma: f64) -> f64 {
    if !in_box(mu, ln_sigma) {
        return f64::INFINITY;
    }
    match TruncNormSpec::new(mu, ln_sigma.exp()) {
        Ok(spec) => distance(target, (spec.mu_w, spec.sigma_w)),
        Err(_) => f64::INFINITY,
    }
}

struct Search {
    mu: f64,
    ln_sigma: f64,
    value: f64,
    iterations: usize,
    evaluations: usize,
}

fn search_from(target: (f64, f64), start: (f64, f64), config: &SimplexConfig) -> Result<Search> {
    let start_ln = start.1.clamp(SIGMA_RANGE.0, SIGMA_RANGE.1).ln();
    let start_mu = start.0.clamp(MU_RANGE.0, MU_RANGE.1);
    if target.0 == 0.5 {
        // A centered target is matched by a centered parent; search sigma only.
        let out = nelder_mead(
            |p: &[f64; 1]| moment_gap(target, 0.5, p[0]),
            [start_ln],
            [INITIAL_STEPS[1]],
            config,
        )?;
        return Ok(Search {
            mu: 0.5,
            ln_sigma: out.argmin[0],
            value: out.value,
            iterations: out.iterations,
            evaluations: out.evaluations,
        });
    }
    let out = nelder_mead(
        |p: &[f64; 2]| moment_gap(target, p[0], p[1]),
        [start_mu, start_ln],
        INITIAL_STEPS,
        config,
    )?;
    Ok(Search {
        mu: out.argmin[0],
        ln_sigma: out.argmin[1],
        value: out.value,
        iterations: out.iterations,
        evaluations: out.evaluations,
    })
}

/// [`calibrate_with`] using the default simplex settings.
pub fn calibrate(p: DecisionPoint, epsilon: f64) -> Result<CalibrationResult> {
    calibrate_with(p, epsilon, &SimplexConfig::default())
}

/// Fits the parent normal for `p`. Rejected points still carry the best
/// parameters found, with `accepted = false`.
///
/// Points with `alpha > 0.5` are solved as their mirror image and
/// reflected back, so `calibrate(p)` and `calibrate(p.mirrored())` agree.
/// `delta = 0` has no parent normal; callers route it to the Dirac weights.
pub fn calibrate_with(
    p: DecisionPoint,
    epsilon: f64,
    config: &SimplexConfig,
) -> Result<CalibrationResult> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(OwaError::Domain(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    if p.delta == 0.0 {
        return Err(OwaError::Domain(
            "delta = 0 is a point mass; use the Dirac weights".into(),
        ));
    }
    let mirror = p.alpha > 0.5;
    let canonical = if mirror { p.mirrored() } else { p };
    let target = target_moments(canonical);

    let start = (target.0, target.1.max(MIN_START_SIGMA));
    let mut best = search_from(target, start, config)?;
    if best.value >= epsilon && is_feasible_parabola(canonical, 0.0) {
        let retry = search_from(target, RESTART, config)?;
        let (iterations, evaluations) = (
            best.iterations + retry.iterations,
            best.evaluations + retry.evaluations,
        );
        if retry.value < best.value {
            best = retry;
        }
        best.iterations = iterations;
        best.evaluations = evaluations;
    }

    let mu = if mirror { 1.0 - best.mu } else { best.mu };
    let spec = TruncNormSpec::new(mu, best.ln_sigma.exp())?;
    let d = distance(target_moments(p), (spec.mu_w, spec.sigma_w));
    Ok(CalibrationResult {
        spec,
        distance: d,
        accepted: d < epsilon,
        iterations: best.iterations,
        function_evals: best.evaluations,
    })
}
