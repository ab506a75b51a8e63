//! One-dimensional continuous setting: step and piecewise-linear functions, the exact
//! uncentered operator `M̃_β` on step functions, and box-kernel mollification.

mod functions;
mod operator;

pub use functions::{PiecewiseLinear1D, StepFunction1D};
pub use operator::{frac_max_cont, ContValue, FracMaxCont};

use serde::{Deserialize, Serialize};

use crate::error::{invalid_input, invalid_param, Result};
use crate::variation::{var_q_adaptive, VariationValue};

/// Relative width of the step pieces used to evaluate `M̃_β` on a piecewise-linear function.
pub const STEP_REFINEMENT: f64 = 1e-3;

/// `f * (2ε)^{-1} χ_{[-ε, ε]}`: piecewise linear with nodes at `b_i ± ε`.
pub fn mollify(f: &StepFunction1D, eps: f64) -> Result<PiecewiseLinear1D> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(invalid_param(format!("eps must be positive, got {eps}")));
    }
    let mut xs: Vec<f64> = f
        .breakpoints()
        .iter()
        .flat_map(|&b| [b - eps, b + eps])
        .collect();
    xs.sort_by(f64::total_cmp);
    let scale = f.support_length().max(eps);
    xs.dedup_by(|a, b| (*a - *b).abs() <= 1e-13 * scale);
    let ys = xs
        .iter()
        .map(|&x| (f.antiderivative(x + eps) - f.antiderivative(x - eps)) / (2.0 * eps))
        .collect::<Vec<_>>();
    let n = ys.len();
    let mut ys = ys;
    // the end nodes sit outside the support; clear rounding residue there
    ys[0] = 0.0;
    ys[n - 1] = 0.0;
    PiecewiseLinear1D::new(xs, ys)
}

/// Step approximation used to evaluate `M̃_β` on a piecewise-linear function with
/// vanishing ends, together with a bound on the resulting error in `M̃_β`.
///
/// Each piece carries the mean of `g`, so `|h - g| ≤ Lip(g)·w/2` pointwise on a support of
/// length `ℓ`, and sublinearity gives `|M̃_β h - M̃_β g| ≤ Lip(g)·w/2·ℓ^β`.
pub fn step_approximation(g: &PiecewiseLinear1D, beta: f64) -> Result<(StepFunction1D, f64)> {
    let xs = g.xs();
    let len = xs[xs.len() - 1] - xs[0];
    let width = STEP_REFINEMENT * len;
    let h = g.to_step(width)?;
    let bound = g.lipschitz() * width / 2.0 * len.powf(beta);
    Ok((h, bound))
}

/// One row of the convergence table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub eps: f64,
    /// `max_x |M̃_β f_ε(x) - M̃_β f(x)|` over the queries.
    pub discrepancy: f64,
    /// Bound on the error from evaluating `M̃_β f_ε` through its step approximation.
    pub discretization_bound: f64,
}

/// Sup discrepancy between `M̃_β f_ε` and `M̃_β f` at the query points, per `ε`.
///
/// Queries must stay at least `max ε` away from the breakpoints of `f`.
pub fn mollification_convergence(
    f: &StepFunction1D,
    beta: f64,
    eps: &[f64],
    queries: &[f64],
) -> Result<Vec<ConvergenceRow>> {
    let mut q = queries.to_vec();
    q.sort_by(f64::total_cmp);
    let emax = eps.iter().fold(0.0f64, |m, &e| m.max(e));
    for &x in &q {
        if let Some(b) = f.breakpoints().iter().find(|&&b| (x - b).abs() < emax) {
            return Err(invalid_input(format!(
                "query {x} lies within {emax} of the breakpoint {b}"
            )));
        }
    }
    let exact = frac_max_cont(f, beta, &q)?;
    eps.iter()
        .map(|&e| {
            let g = mollify(f, e)?;
            let (h, bound) = step_approximation(&g, beta)?;
            let approx = frac_max_cont(&h, beta, &q)?;
            let discrepancy = approx
                .iter()
                .zip(&exact)
                .map(|(a, b)| (a.value - b.value).abs())
                .fold(0.0, f64::max);
            Ok(ConvergenceRow {
                eps: e,
                discrepancy,
                discretization_bound: bound,
            })
        })
        .collect()
}

/// Lower bound for `Var_q(M̃_β f)` from adaptively refined partitions.
///
/// The partition starts from the breakpoints of `f`, the optimal interval endpoints at
/// those points, and geometric tails reaching `2^14` support lengths beyond the support.
/// Refinement halves every interval until the Riesz sum stabilizes to `rel_tol`.
pub fn var_q_frac_max_cont(
    f: &StepFunction1D,
    beta: f64,
    q: f64,
    rel_tol: f64,
) -> Result<VariationValue> {
    let op = FracMaxCont::new(f, beta)?;
    let mut pts: Vec<f64> = f.breakpoints().to_vec();
    for c in op.eval_many(f.breakpoints()) {
        pts.push(c.u);
        pts.push(c.v);
    }
    let (lo, hi, len) = (f.support_lo(), f.support_hi(), f.support_length());
    for j in -6..=14 {
        let d = len * 2f64.powi(j);
        pts.push(lo - d);
        pts.push(hi + d);
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    var_q_adaptive(
        |xs| Ok(op.eval_many(xs).into_iter().map(|c| c.value).collect()),
        pts,
        q,
        rel_tol,
    )
}
