//! Nelder-Mead downhill simplex over `R^N`.

use crate::error::{OwaError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexConfig {
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
    /// Stop once every vertex lies within this distance of the best one.
    pub diameter_tol: f64,
    /// Stop once `f(worst) - f(best)` falls below this.
    pub spread_tol: f64,
    pub max_iterations: usize,
}

impl Default for SimplexConfig {
    fn default() -> Self {
        Self {
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
            diameter_tol: 1e-12,
            spread_tol: 1e-14,
            max_iterations: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexOutcome<const N: usize> {
    pub argmin: [f64; N],
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Clone, Copy)]
struct Vertex<const N: usize> {
    x: [f64; N],
    f: f64,
}

/// Affine combination `from + t * (to - from)`.
fn toward<const N: usize>(from: &[f64; N], to: &[f64; N], t: f64) -> [f64; N] {
    std::array::from_fn(|i| from[i] + t * (to[i] - from[i]))
}

fn distance<const N: usize>(a: &[f64; N], b: &[f64; N]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(p, q)| (p - q).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Minimizes `objective` from `start`. The initial simplex is `start` plus
/// one vertex offset by `steps[i]` along each axis.
///
/// Non-finite objective values are treated as `+inf`, which lets callers
/// fence off infeasible regions. The start itself must evaluate finite.
pub fn nelder_mead<const N: usize, F>(
    mut objective: F,
    start: [f64; N],
    steps: [f64; N],
    config: &SimplexConfig,
) -> Result<SimplexOutcome<N>>
where
    F: FnMut(&[f64; N]) -> f64,
{
    let mut evaluations = 0usize;
    let mut eval = |x: &[f64; N]| {
        evaluations += 1;
        let f = objective(x);
        if f.is_nan() {
            f64::INFINITY
        } else {
            f
        }
    };

    let f0 = eval(&start);
    if !f0.is_finite() {
        return Err(OwaError::Domain(format!(
            "objective is not finite at the start point {start:?}"
        )));
    }
    let mut simplex: Vec<Vertex<N>> = Vec::with_capacity(N + 1);
    simplex.push(Vertex { x: start, f: f0 });
    for (i, step) in steps.iter().enumerate() {
        let mut x = start;
        x[i] += step;
        simplex.push(Vertex { x, f: eval(&x) });
    }

    let mut iterations = 0;
    let mut converged = false;
    loop {
        // Stable sort keeps the earlier vertex first on ties.
        simplex.sort_by(|a, b| a.f.total_cmp(&b.f));
        let best = simplex[0];
        let worst = simplex[N];
        let spread = worst.f - best.f;
        let diameter = simplex[1..]
            .iter()
            .map(|v| distance(&v.x, &best.x))
            .fold(0.0, f64::max);
        if spread.abs() <= config.spread_tol || diameter <= config.diameter_tol {
            converged = true;
            break;
        }
        if iterations >= config.max_iterations {
            break;
        }
        iterations += 1;

        let centroid: [f64; N] =
            std::array::from_fn(|i| simplex[..N].iter().map(|v| v.x[i]).sum::<f64>() / N as f64);
        let second_worst = simplex[N - 1].f;

        let xr = toward(&centroid, &worst.x, -config.reflection);
        let fr = eval(&xr);

        if fr < best.f {
            let xe = toward(&centroid, &xr, config.expansion);
            let fe = eval(&xe);
            simplex[N] = if fe < fr {
                Vertex { x: xe, f: fe }
            } else {
                Vertex { x: xr, f: fr }
            };
            continue;
        }
        if fr < second_worst {
            simplex[N] = Vertex { x: xr, f: fr };
            continue;
        }
        let (xc, fc, accept) = if fr < worst.f {
            let xc = toward(&centroid, &xr, config.contraction);
            let fc = eval(&xc);
            (xc, fc, fc <= fr)
        } else {
            let xc = toward(&centroid, &worst.x, config.contraction);
            let fc = eval(&xc);
            (xc, fc, fc < worst.f)
        };
        if accept {
            simplex[N] = Vertex { x: xc, f: fc };
            continue;
        }
        for v in simplex.iter_mut().skip(1) {
            v.x = toward(&best.x, &v.x, config.shrink);
            v.f = eval(&v.x);
        }
    }

    let best = simplex[0];
    Ok(SimplexOutcome {
        argmin: best.x,
        value: best.f,
        iterations,
        evaluations,
        converged,
    })
}
