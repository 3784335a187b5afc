//! Normal distribution truncated to `[0, 1]`: density and closed-form
//! post-truncation mean and standard deviation, plus a quadrature oracle
//! for the same moments.
//!
//! Parents with `mu > 0.5` are evaluated through the mirror image
//! `x -> 1 - x`, so that at least one truncation bound is on the same side
//! as the mean and the tail ratios can be formed from `erfcx` without
//! underflow. Every quantity is therefore exactly mirror-symmetric.

use serde::{Deserialize, Serialize};

use crate::error::{OwaError, Result};
use crate::quadrature;
use crate::special::{erfcx, norm_interval, norm_pdf};

/// Standard deviation of `U[0, 1]`, `1 / (2 sqrt 3)`: the supremum of the
/// truncated standard deviation.
pub const UNIFORM_STD: f64 = 0.288_675_134_594_812_9;

/// Smallest normalizing mass (after tail scaling) treated as nonzero.
pub const MIN_NORMALIZER: f64 = 1e-300;

/// Largest negative radicand in the variance formula absorbed as rounding.
const RADICAND_SLACK: f64 = 1e-12;

const SQRT_2_OVER_PI: f64 = 0.797_884_560_802_865_4;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Tail ratios of the canonical (`mu <= 0.5`) parent.
#[derive(Debug, Clone, Copy)]
struct Ratios {
    /// `(phi(a) - phi(b)) / Z`
    shift: f64,
    /// `(a phi(a) - b phi(b)) / Z`
    spread: f64,
    /// `ln Z = -anchor^2 / 2 + log_rest`
    anchor: f64,
    log_rest: f64,
}

/// Mirrors parents centered above 0.5 onto `mu <= 0.5`.
fn canonical(mu: f64) -> (f64, bool) {
    if mu > 0.5 {
        (1.0 - mu, true)
    } else {
        (mu, false)
    }
}

fn ratios(mu: f64, sigma: f64) -> Result<Ratios> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(OwaError::Domain(format!(
            "sigma must be positive, got {sigma}"
        )));
    }
    if !mu.is_finite() {
        return Err(OwaError::Domain(format!("mu must be finite, got {mu}")));
    }
    let a = -mu / sigma;
    let b = (1.0 - mu) / sigma;
    // b^2 - a^2 = (b - a)(b + a) with b - a = 1/sigma
    let half_gap = 0.5 * (b + a) / sigma;
    let one_minus_r = -(-half_gap).exp_m1();

    if a >= 0.0 {
        // Both bounds above the mean: factor exp(-a^2/2) out of Z and phi.
        let r = (-half_gap).exp();
        let scaled = erfcx(a * std::f64::consts::FRAC_1_SQRT_2)
            - r * erfcx(b * std::f64::consts::FRAC_1_SQRT_2);
        if !(scaled.is_finite() && scaled > MIN_NORMALIZER) {
            return Err(OwaError::Underflow { mu, sigma });
        }
        let k = SQRT_2_OVER_PI / scaled;
        Ok(Ratios {
            shift: k * one_minus_r,
            spread: k * (a - b * r),
            anchor: a,
            log_rest: (0.5 * scaled).ln(),
        })
    } else {
        let z = norm_interval(a, b);
        if !(z.is_finite() && z > MIN_NORMALIZER) {
            return Err(OwaError::Underflow { mu, sigma });
        }
        let pa = norm_pdf(a);
        Ok(Ratios {
            shift: pa * one_minus_r / z,
            spread: (a * pa - b * norm_pdf(b)) / z,
            anchor: 0.0,
            log_rest: z.ln(),
        })
    }
}

fn moments(mu: f64, sigma: f64) -> Result<(f64, f64)> {
    let (mu_c, reflected) = canonical(mu);
    let r = ratios(mu_c, sigma)?;
    let mean_c = (mu_c + sigma * r.shift).clamp(0.0, 1.0);
    let radicand = 1.0 + r.spread - r.shift * r.shift;
    if radicand < -RADICAND_SLACK || !radicand.is_finite() {
        return Err(OwaError::Numerical(format!(
            "negative variance radicand {radicand:e} for mu = {mu}, sigma = {sigma}"
        )));
    }
    let std = sigma * radicand.max(0.0).sqrt();
    let mean = if reflected { 1.0 - mean_c } else { mean_c };
    Ok((mean, std))
}

/// Mean of `N(mu, sigma^2)` truncated to `[0, 1]`.
pub fn truncated_mean(mu: f64, sigma: f64) -> Result<f64> {
    moments(mu, sigma).map(|(m, _)| m)
}

/// Standard deviation of `N(mu, sigma^2)` truncated to `[0, 1]`.
pub fn truncated_std(mu: f64, sigma: f64) -> Result<f64> {
    moments(mu, sigma).map(|(_, s)| s)
}

/// A parent normal together with the moments it has after truncation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncNormSpec {
    pub mu: f64,
    pub sigma: f64,
    pub mu_w: f64,
    pub sigma_w: f64,
}

impl TruncNormSpec {
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        let (mu_w, sigma_w) = moments(mu, sigma)?;
        Ok(Self {
            mu,
            sigma,
            mu_w,
            sigma_w,
        })
    }

    /// Natural log of the density; `-inf` outside `[0, 1]`.
    pub fn ln_pdf(&self, x: f64) -> f64 {
        if !(0.0..=1.0).contains(&x) {
            return f64::NEG_INFINITY;
        }
        let (mu_c, reflected) = canonical(self.mu);
        let x = if reflected { 1.0 - x } else { x };
        // Construction already validated these parameters.
        let r = ratios(mu_c, self.sigma).expect("validated truncated normal");
        let z = (x - mu_c) / self.sigma;
        -0.5 * (z - r.anchor) * (z + r.anchor) - r.log_rest - LN_SQRT_2PI - self.sigma.ln()
    }

    /// `phi((x - mu)/sigma) / (sigma (Phi((1-mu)/sigma) - Phi(-mu/sigma)))` on
    /// `[0, 1]`, zero elsewhere.
    pub fn pdf(&self, x: f64) -> f64 {
        self.ln_pdf(x).exp()
    }
}

/// Density of a validated spec at `x`.
pub fn pdf(spec: &TruncNormSpec, x: f64) -> f64 {
    spec.pdf(x)
}

/// Truncated mean and standard deviation by adaptive quadrature of the
/// unnormalized parent density. Shares nothing with the closed forms but
/// `exp`, so it serves as their independent check.
pub fn oracle_moments(mu: f64, sigma: f64) -> Result<(f64, f64)> {
    if !(sigma.is_finite() && sigma > 0.0 && mu.is_finite()) {
        return Err(OwaError::Domain(format!(
            "oracle needs finite mu and positive sigma, got ({mu}, {sigma})"
        )));
    }
    // Kernel scaled to 1 at the support point nearest the parent mean.
    let peak = mu.clamp(0.0, 1.0);
    let two_var = 2.0 * sigma * sigma;
    let kernel = move |x: f64| (-(x - peak) * (x + peak - 2.0 * mu) / two_var).exp();

    // Panels at geometric offsets from the peak, scaled to its width (the
    // exponential decay length when the parent mean lies outside [0, 1]).
    let outside = (mu - peak).abs();
    let width = if outside > 0.0 {
        sigma.min(sigma * sigma / outside)
    } else {
        sigma
    };
    let mut breaks: Vec<f64> = (0..64)
        .map(|k| width * 2f64.powi(k))
        .take_while(|d| *d < 1.0)
        .flat_map(|d| [peak - d, peak + d])
        .chain(std::iter::once(peak))
        .filter(|x| *x > 0.0 && *x < 1.0)
        .collect();
    breaks.sort_by(f64::total_cmp);

    let integral = |g: &dyn Fn(f64) -> f64, tol: f64| {
        quadrature::integrate_with_breaks(g, 0.0, 1.0, &breaks, tol)
    };
    let rough = integral(&kernel, 1e-10)?;
    if rough.is_nan() || rough <= 0.0 {
        return Err(OwaError::Underflow { mu, sigma });
    }
    let tol = 1e-14 * rough;
    let mass = integral(&kernel, tol)?;
    let mean = integral(&|x| x * kernel(x), tol)? / mass;
    let var = integral(
        &|x| (x - mean).powi(2) * kernel(x),
        tol * width.min(1.0).powi(2),
    )? / mass;
    Ok((mean, var.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_parent_has_centered_mean() {
        for sigma in [1e-4, 0.05, 0.3, 2.0, 100.0] {
            assert_eq!(truncated_mean(0.5, sigma).unwrap(), 0.5);
        }
    }

    #[test]
    fn wide_parent_approaches_uniform() {
        assert!((truncated_mean(0.5, 100.0).unwrap() - 0.5).abs() < 1e-12);
        let s = truncated_std(0.5, 100.0).unwrap();
        assert!((s - UNIFORM_STD).abs() < 1e-4);
        assert!(s < UNIFORM_STD);
        assert!((UNIFORM_STD - 1.0 / (2.0 * 3f64.sqrt())).abs() < 1e-16);
    }

    #[test]
    fn narrow_parent_collapses() {
        let s = truncated_std(0.5, 1e-6).unwrap();
        assert!((s - 1e-6).abs() < 1e-15);
        assert!(truncated_std(0.5, 1e-9).unwrap() < 1e-8);
    }

    #[test]
    fn closed_form_against_quadrature_at_reference_point() {
        let (m, s) = oracle_moments(0.3, 0.2).unwrap();
        assert!((truncated_mean(0.3, 0.2).unwrap() - m).abs() < 1e-10);
        assert!((truncated_std(0.3, 0.2).unwrap() - s).abs() < 1e-10);
    }

    #[test]
    fn oracle_reference_cases() {
        let (m, _) = oracle_moments(0.5, 0.5).unwrap();
        assert!((m - 0.5).abs() < 1e-13);
        let (m, _) = oracle_moments(2.0, 0.5).unwrap();
        assert!(m > 0.5 && m < 1.0);
    }

    #[test]
    fn pdf_support_and_symmetry() {
        let spec = TruncNormSpec::new(0.5, 10.0).unwrap();
        assert!((spec.pdf(0.2) - spec.pdf(0.8)).abs() < 1e-14);
        let spec = TruncNormSpec::new(0.3, 0.2).unwrap();
        assert_eq!(spec.pdf(-0.1), 0.0);
        assert_eq!(spec.pdf(1.0001), 0.0);
    }

    #[test]
    fn pdf_integrates_to_one() {
        let spec = TruncNormSpec::new(0.3, 0.2).unwrap();
        let mass = quadrature::integrate(|x| spec.pdf(x), 0.0, 1.0, 1e-13).unwrap();
        assert!((mass - 1.0).abs() < 1e-10, "{mass}");
    }

    #[test]
    fn pdf_matches_direct_formula_in_body() {
        // Direct evaluation with the unscaled CDF difference.
        let (mu, sigma) = (0.3, 0.2);
        let spec = TruncNormSpec::new(mu, sigma).unwrap();
        let z =
            crate::special::norm_cdf((1.0 - mu) / sigma) - crate::special::norm_cdf(-mu / sigma);
        for x in [0.0, 0.1, 0.45, 0.9, 1.0] {
            let direct = norm_pdf((x - mu) / sigma) / (sigma * z);
            assert!((spec.pdf(x) - direct).abs() < 1e-13 * direct.max(1.0));
        }
    }

    #[test]
    fn deep_tail_parents_stay_finite() {
        // Z is around exp(-1250) here; the scaled ratios do not see it.
        let spec = TruncNormSpec::new(-0.5, 0.01).unwrap();
        assert!(spec.mu_w > 0.0 && spec.mu_w < 1e-3);
        let (m, s) = oracle_moments(-0.5, 0.01).unwrap();
        assert!((spec.mu_w - m).abs() < 1e-12);
        assert!((spec.sigma_w - s).abs() < 1e-12);
        assert!(spec.pdf(0.0).is_finite() && spec.pdf(0.0) > 0.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(truncated_mean(0.5, 0.0), Err(OwaError::Domain(_))));
        assert!(matches!(
            truncated_mean(0.5, -1.0),
            Err(OwaError::Domain(_))
        ));
        assert!(matches!(
            truncated_std(f64::NAN, 1.0),
            Err(OwaError::Domain(_))
        ));
        assert!(TruncNormSpec::new(0.5, f64::INFINITY).is_err());
    }

    #[test]
    fn unreachable_parent_underflows() {
        // The bounds overflow to +inf: no representable mass on [0, 1].
        assert!(matches!(
            truncated_mean(-1e300, 1e-10),
            Err(OwaError::Underflow { .. })
        ));
    }
}
