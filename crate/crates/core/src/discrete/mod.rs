//! Discrete fractional maximal operators on `Z^d`.
//!
//! For a body `Ω`, the average of `|f|` over the lattice ball `Ω̄_r(x0)` is
//! `N^{-1+β/d} Σ_{m ∈ Ω̄_r(x0)} |f(m)|` with `N` the number of lattice points in the ball.
//! The centered operator takes the supremum over balls centered at `n`, the uncentered one
//! over all balls containing `n`. In one dimension with `Ω = (-1, 1)` the lattice balls are
//! the integer intervals `[n - r, n + s]`.

mod boxsum;
mod centered;
mod integral;
mod one_dim;
mod radius;
mod uncentered;

pub use centered::frac_max_nd_centered;
pub use integral::{frac_integral, frac_integral_at};
pub use one_dim::{frac_max_1d_centered, frac_max_1d_uncentered};
pub use radius::{argmax_radius_set, RadiusSet};
pub use uncentered::frac_max_nd_uncentered;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, invalid_param, Result};
use crate::lattice::{EvaluationWindow, LatticeFunction};
use crate::num::{compensated_sum, pow_count, value_key};
use crate::omega::{for_each_in_ball, ConvexBody};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Centered,
    Uncentered,
}

impl std::str::FromStr for Mode {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "centered" => Ok(Mode::Centered),
            "uncentered" => Ok(Mode::Uncentered),
            _ => Err(invalid_param(format!(
                "mode must be centered or uncentered, got `{s}`"
            ))),
        }
    }
}

/// The ball attaining the supremum at one evaluation point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    /// Evaluation point.
    pub n: Vec<i64>,
    /// Ball center.
    pub x0: Vec<f64>,
    /// Ball radius.
    pub r: f64,
    /// One-dimensional window `[n - left, n + right]`, when the ball is an interval window.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<[u64; 2]>,
}

/// Values of a maximal operator on an evaluation window together with per-point
/// certificates, listed in the storage order of `values`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaximalResult {
    pub values: LatticeFunction,
    pub certificates: Vec<Certificate>,
    pub beta: f64,
    pub mode: Mode,
    /// False when the values are only guaranteed lower bounds of the operator.
    pub exact: bool,
}

impl MaximalResult {
    pub fn value_at(&self, n: &[i64]) -> Option<f64> {
        self.values.index_of(n).map(|i| self.values.values()[i])
    }

    pub fn certificate_at(&self, n: &[i64]) -> Option<&Certificate> {
        self.values.index_of(n).map(|i| &self.certificates[i])
    }

    pub fn window(&self) -> EvaluationWindow {
        self.values.window()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("finite values serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

pub(crate) fn check_beta(beta: f64, d: usize) -> Result<()> {
    if !(beta >= 0.0 && beta < d as f64) {
        return Err(invalid_param(format!(
            "beta = {beta} must lie in [0, {d})"
        )));
    }
    Ok(())
}

pub(crate) fn check_window(f: &LatticeFunction, window: &EvaluationWindow) -> Result<()> {
    check_dim(f.dim(), window.dim())
}

/// `N^{-1+β/d} Σ |f(m)|` over the lattice points of `Ω̄_r(x0)`; zero for an empty ball.
pub fn fractional_average(
    f: &LatticeFunction,
    body: &ConvexBody,
    x0: &[f64],
    r: f64,
    beta: f64,
) -> Result<f64> {
    let d = f.dim();
    check_dim(d, body.dim())?;
    check_beta(beta, d)?;
    let mut terms = Vec::new();
    for_each_in_ball(body, x0, r, |m, _| terms.push(f.get(m).abs()))?;
    if terms.is_empty() {
        return Ok(0.0);
    }
    let n = terms.len() as f64;
    Ok(compensated_sum(terms) / pow_count(n, 1.0 - beta / d as f64))
}

/// Average over the integer window `[n - left, n + right]` with weight `(left + right + 1)^{β-1}`.
pub fn window_average_1d(f: &LatticeFunction, n: i64, left: u64, right: u64, beta: f64) -> f64 {
    let s = compensated_sum((n - left as i64..=n + right as i64).map(|k| f.get(&[k]).abs()));
    s / pow_count((left + right + 1) as f64, 1.0 - beta)
}

/// Best candidate so far at one evaluation point of a d-dimensional operator.
#[derive(Clone, Debug)]
pub(crate) struct Best {
    pub value: f64,
    pub r: f64,
    pub center: Vec<f64>,
}

impl Best {
    pub(crate) fn empty(d: usize) -> Self {
        Best {
            value: f64::NEG_INFINITY,
            r: 0.0,
            center: vec![0.0; d],
        }
    }

    /// Ordering: larger value key, then smaller radius, then lexicographically smaller center.
    #[inline]
    pub(crate) fn loses_to(&self, value: f64, r: f64, center: &[f64]) -> bool {
        let (a, b) = (value_key(value), value_key(self.value));
        if a != b {
            return a > b;
        }
        if r != self.r {
            return r < self.r;
        }
        for (a, b) in center.iter().zip(&self.center) {
            if a != b {
                return a < b;
            }
        }
        false
    }

    #[inline]
    pub(crate) fn offer(&mut self, value: f64, r: f64, center: &[f64]) {
        if self.loses_to(value, r, center) {
            self.value = value;
            self.r = r;
            self.center.clear();
            self.center.extend_from_slice(center);
        }
    }

    pub(crate) fn merge(&mut self, other: &Best) {
        self.offer(other.value, other.r, &other.center);
    }
}

pub(crate) fn assemble(
    window: &EvaluationWindow,
    best: Vec<Best>,
    beta: f64,
    mode: Mode,
    exact: bool,
) -> Result<MaximalResult> {
    let mut values = Vec::with_capacity(best.len());
    let mut certificates = Vec::with_capacity(best.len());
    for (n, b) in window.points().zip(best) {
        let value = if b.value.is_finite() { b.value.max(0.0) } else { 0.0 };
        let (x0, r) = if b.value.is_finite() {
            (b.center, b.r)
        } else {
            (n.iter().map(|&v| v as f64).collect(), 0.0)
        };
        values.push(value);
        certificates.push(Certificate {
            n,
            x0,
            r,
            window: None,
        });
    }
    Ok(MaximalResult {
        values: LatticeFunction::new(window.lo().to_vec(), window.hi().to_vec(), values)?,
        certificates,
        beta,
        mode,
        exact,
    })
}

/// Corners of the integer box `[lo, hi]`.
pub(crate) fn box_corners(lo: &[i64], hi: &[i64]) -> Vec<Vec<i64>> {
    let d = lo.len();
    (0..1usize << d)
        .map(|mask| {
            (0..d)
                .map(|i| if mask >> i & 1 == 1 { hi[i] } else { lo[i] })
                .collect()
        })
        .collect()
}

/// Smallest radius whose ball centered at `n` covers the box `[lo, hi]`.
pub(crate) fn cover_radius(body: &ConvexBody, n: &[i64], lo: &[i64], hi: &[i64]) -> f64 {
    let x0: Vec<f64> = n.iter().map(|&v| v as f64).collect();
    let mut buf = vec![0.0; n.len()];
    box_corners(lo, hi)
        .iter()
        .map(|c| body.gauge_offset(c, &x0, &mut buf))
        .fold(0.0, f64::max)
}

/// Largest cover radius over the evaluation window.
pub(crate) fn max_cover_radius(
    body: &ConvexBody,
    window: &EvaluationWindow,
    lo: &[i64],
    hi: &[i64],
) -> f64 {
    box_corners(window.lo(), window.hi())
        .iter()
        .map(|n| cover_radius(body, n, lo, hi))
        .fold(0.0, f64::max)
}
