//! Adaptive Gauss-Kronrod (7/15) quadrature. Backs the independent
//! moment oracle for the truncated normal.

use crate::error::{OwaError, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
// Gauss weights for the odd Kronrod nodes (1, 3, 5) and the center.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_DEPTH: u32 = 60;
const MAX_INTERVALS: usize = 1 << 20;
/// Error estimates below this fraction of the panel's magnitude are
/// rounding noise and cannot be reduced by further bisection.
const ROUNDOFF: f64 = 50.0 * f64::EPSILON;

/// Returns the Kronrod estimate, its error estimate and the integral of |f|.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut magnitude = fc.abs() * WGK[7];
    for (j, (&x, &wk)) in XGK.iter().zip(&WGK).take(7).enumerate() {
        let dx = half * x;
        let (lo, hi) = (f(center - dx), f(center + dx));
        kronrod += wk * (lo + hi);
        magnitude += wk * (lo.abs() + hi.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (lo + hi);
        }
    }
    (
        kronrod * half,
        ((kronrod - gauss) * half).abs(),
        magnitude * half.abs(),
    )
}

struct Adaptive<'f, F> {
    f: &'f F,
    intervals: usize,
}

impl<F: Fn(f64) -> f64> Adaptive<'_, F> {
    fn run(&mut self, a: f64, b: f64, tol: f64, depth: u32) -> Result<f64> {
        self.intervals += 1;
        let (value, err, magnitude) = gk15(self.f, a, b);
        if !value.is_finite() {
            return Err(OwaError::Numerical(format!(
                "non-finite integrand on [{a}, {b}]"
            )));
        }
        if err <= tol.max(ROUNDOFF * magnitude) {
            return Ok(value);
        }
        if depth >= MAX_DEPTH || self.intervals >= MAX_INTERVALS {
            return Err(OwaError::Numerical(format!(
                "quadrature did not converge on [{a}, {b}] (error estimate {err:e})"
            )));
        }
        let mid = 0.5 * (a + b);
        Ok(self.run(a, mid, 0.5 * tol, depth + 1)? + self.run(mid, b, 0.5 * tol, depth + 1)?)
    }
}

/// Integrates `f` over `[a, b]` to an absolute error estimate of `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && a <= b && tol > 0.0) {
        return Err(OwaError::Domain(format!(
            "bad quadrature request on [{a}, {b}] with tolerance {tol}"
        )));
    }
    Adaptive {
        f: &f,
        intervals: 0,
    }
    .run(a, b, tol, 0)
}

/// [`integrate`] over consecutive panels split at `breaks` (which must be
/// ascending and lie within `[a, b]`). Splitting at known features keeps
/// the first Kronrod panel from stepping over a narrow peak.
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    tol: f64,
) -> Result<f64> {
    let mut edges = Vec::with_capacity(breaks.len() + 2);
    edges.push(a);
    edges.extend(breaks.iter().copied().filter(|x| *x > a && *x < b));
    edges.push(b);
    if edges.windows(2).any(|w| w[0] > w[1]) {
        return Err(OwaError::Domain("breakpoints must be ascending".into()));
    }
    let share = tol / (edges.len() - 1) as f64;
    edges
        .windows(2)
        .map(|w| integrate(&f, w[0], w[1], share))
        .sum()
}
