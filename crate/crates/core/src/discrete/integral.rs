//! Discrete fractional integral `I_β f(n) = Σ_{m≠0} f(n-m) / |m|^{d-β}`.

use crate::error::{invalid_param, Result};
use crate::lattice::{EvaluationWindow, LatticeFunction};
use crate::num::compensated_sum;

fn check_integral_beta(beta: f64, d: usize) -> Result<()> {
    if !(beta > 0.0 && beta < d as f64) {
        return Err(invalid_param(format!(
            "fractional integral needs beta in (0, {d}), got {beta}"
        )));
    }
    Ok(())
}

fn support_points(f: &LatticeFunction) -> Vec<(Vec<i64>, f64)> {
    f.iter().filter(|(_, v)| *v != 0.0).collect()
}

fn riesz_sum(points: &[(Vec<i64>, f64)], n: &[i64], expo: f64, radius: f64) -> f64 {
    compensated_sum(points.iter().filter_map(|(p, v)| {
        let r2: i64 = p.iter().zip(n).map(|(a, b)| (a - b) * (a - b)).sum();
        if r2 == 0 {
            return None;
        }
        let dist = (r2 as f64).sqrt();
        (dist <= radius + 1e-12).then(|| v / dist.powf(expo))
    }))
}

/// `I_β f` at a single point, summed over the whole support.
pub fn frac_integral_at(f: &LatticeFunction, beta: f64, n: &[i64]) -> Result<f64> {
    let d = f.dim();
    check_integral_beta(beta, d)?;
    crate::error::check_dim(d, n.len())?;
    Ok(riesz_sum(&support_points(f), n, d as f64 - beta, f64::INFINITY))
}

/// `I_β f` on the support hull inflated by `⌈truncation_radius⌉`, with terms restricted to
/// Euclidean distance `|m| <= truncation_radius`.
///
/// When the radius covers the support seen from every output point the values are the
/// full (untruncated) sums.
pub fn frac_integral(
    f: &LatticeFunction,
    beta: f64,
    truncation_radius: f64,
) -> Result<LatticeFunction> {
    let d = f.dim();
    check_integral_beta(beta, d)?;
    if !(truncation_radius >= 0.0) || !truncation_radius.is_finite() {
        return Err(invalid_param(format!(
            "truncation radius must be finite and >= 0, got {truncation_radius}"
        )));
    }
    let Some((lo, hi)) = f.support_hull() else {
        return LatticeFunction::zeros(f.box_lo().to_vec(), f.box_hi().to_vec());
    };
    let pad = truncation_radius.ceil() as i64;
    let window = EvaluationWindow::new(
        lo.iter().map(|a| a - pad).collect(),
        hi.iter().map(|b| b + pad).collect(),
    )?;
    let pts = support_points(f);
    let expo = d as f64 - beta;
    LatticeFunction::from_fn(&window, |n| riesz_sum(&pts, n, expo, truncation_radius))
}
