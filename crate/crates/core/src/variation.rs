//! Discrete `q`-variation and the Riesz `q`-variation of functions on the line.
//!
//! `Var_q(g) = sup_P (Σ |g(x_{n+1}) - g(x_n)|^q / |x_{n+1} - x_n|^{q-1})^{1/q}`. Refining a
//! partition never decreases the Riesz sum, and for piecewise-linear `g` the breakpoint
//! partition already attains the supremum.

use serde::{Deserialize, Serialize};

use crate::continuous::PiecewiseLinear1D;
use crate::discrete::{MaximalResult, Mode};
use crate::error::{invalid_input, invalid_param, Result};
use crate::lattice::{EvaluationWindow, LatticeFunction};
use crate::num::compensated_sum;

/// Largest partition `var_q_adaptive` refines to.
pub const MAX_ADAPTIVE_POINTS: usize = 1 << 21;

/// Strictly increasing points `x_1 < … < x_N`, `N >= 2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Partition(Vec<f64>);

impl TryFrom<Vec<f64>> for Partition {
    type Error = crate::Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<f64> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl Partition {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(invalid_input("a partition needs at least two points"));
        }
        if points.iter().any(|x| !x.is_finite()) || points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid_input("partition points must be finite and strictly increasing"));
        }
        Ok(Partition(points))
    }

    pub fn points(&self) -> &[f64] {
        &self.0
    }

    /// Inserts `n` equally spaced points into every interval.
    pub fn refine(&self, n: usize) -> Partition {
        let mut out = Vec::with_capacity(self.0.len() + n * (self.0.len() - 1));
        for w in self.0.windows(2) {
            out.push(w[0]);
            for j in 1..=n {
                out.push(w[0] + (w[1] - w[0]) * j as f64 / (n + 1) as f64);
            }
        }
        out.push(self.0[self.0.len() - 1]);
        out.dedup();
        Partition(out)
    }
}

/// A computed variation.
///
/// `tail_bound` bounds the part of `Σ |Δ|^q` not seen by the computation, so the full
/// variation lies between `value` and [`VariationValue::upper`]. When `infinite` is set the
/// sums kept growing under refinement and `value` is the last partial value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VariationValue {
    pub value: f64,
    pub q: f64,
    pub tail_bound: f64,
    pub infinite: bool,
}

impl VariationValue {
    fn finite(sum: f64, q: f64, tail_bound: f64) -> Self {
        VariationValue {
            value: root(sum, q),
            q,
            tail_bound,
            infinite: false,
        }
    }

    /// `(value^q + tail_bound)^{1/q}`.
    pub fn upper(&self) -> f64 {
        root(self.value.powf(self.q) + self.tail_bound, self.q)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("finite values serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

fn root(s: f64, q: f64) -> f64 {
    if q == 1.0 {
        s
    } else {
        s.powf(1.0 / q)
    }
}

fn check_q(q: f64) -> Result<()> {
    if !(q >= 1.0 && q.is_finite()) {
        return Err(invalid_param(format!("q = {q} must be finite and >= 1")));
    }
    Ok(())
}

/// `Σ |y_{n+1} - y_n|^q / |x_{n+1} - x_n|^{q-1}` (without the `1/q` root).
pub fn riesz_sum(xs: &[f64], ys: &[f64], q: f64) -> f64 {
    compensated_sum(xs.windows(2).zip(ys.windows(2)).map(|(x, y)| {
        let dy = (y[1] - y[0]).abs();
        if q == 1.0 {
            dy
        } else {
            dy.powf(q) / (x[1] - x[0]).powf(q - 1.0)
        }
    }))
}

fn edges_1d(f: &LatticeFunction, window: &EvaluationWindow) -> Result<(i64, i64)> {
    if f.dim() != 1 || window.dim() != 1 {
        return Err(invalid_input("the discrete q-variation needs one-dimensional data"));
    }
    Ok((window.lo()[0], window.hi()[0]))
}

/// `(Σ_{lo ≤ n < hi} |f(n+1) - f(n)|^q)^{1/q}` over the window.
///
/// The differences reaching outside the window are bounded by `|f(lo)|^q + |f(hi)|^q`,
/// which is exact when `f` vanishes outside the window and otherwise assumes `f` decays
/// monotonically to zero beyond both edges.
pub fn var_q_discrete(
    f: &LatticeFunction,
    q: f64,
    window: &EvaluationWindow,
) -> Result<VariationValue> {
    check_q(q)?;
    let (lo, hi) = edges_1d(f, window)?;
    let sum = compensated_sum((lo..hi).map(|n| (f.get(&[n + 1]) - f.get(&[n])).abs().powf(q)));
    let tail = f.get(&[lo]).abs().powf(q) + f.get(&[hi]).abs().powf(q);
    Ok(VariationValue::finite(sum, q, tail))
}

/// Sharper tail bound for one side of a one-dimensional maximal function beyond the
/// support of `f`, where it is monotone.
///
/// With `m = ‖f‖_1` and `γ = 1 - β` each step there is at most `m·γ·j^{-1-γ}` at distance
/// `j` from the support, the values tend to zero, and `Σ Δ^q ≤ (Σ Δ)^q`.
fn monotone_tail(edge_value: f64, mass: f64, gamma: f64, dist: i64, q: f64, decay: bool) -> f64 {
    let total = edge_value.powf(q);
    if q == 1.0 || !decay {
        return total;
    }
    let s = q * (1.0 + gamma);
    let t = dist as f64;
    let zeta = t.powf(-s) + t.powf(1.0 - s) / (s - 1.0);
    total.min((mass * gamma).powf(q) * zeta)
}

/// `Var_q` of a one-dimensional maximal function computed on a window covering the
/// support of `f`, with the exterior contribution bounded from the monotone tails.
///
/// For `q = 1` the bound is the sum of the two edge values and is exact.
pub fn var_q_maximal_1d(result: &MaximalResult, f: &LatticeFunction, q: f64) -> Result<VariationValue> {
    check_q(q)?;
    let window = result.window();
    let (lo, hi) = edges_1d(f, &window)?;
    let g = &result.values;
    let sum = compensated_sum((lo..hi).map(|n| (g.get(&[n + 1]) - g.get(&[n])).abs().powf(q)));
    let Some((a, b)) = f.support_hull() else {
        return Ok(VariationValue::finite(sum, q, 0.0));
    };
    let (a, b) = (a[0], b[0]);
    if lo > a || hi < b {
        return Err(invalid_input(format!(
            "window {lo}:{hi} must cover the support {a}:{b}"
        )));
    }
    let mass = f.lp_norm(1.0)?;
    let gamma = 1.0 - result.beta;
    let decay = result.mode == Mode::Uncentered;
    let tail = monotone_tail(g.get(&[hi]), mass, gamma, hi - b + 1, q, decay)
        + monotone_tail(g.get(&[lo]), mass, gamma, a - lo + 1, q, decay);
    Ok(VariationValue::finite(sum, q, tail))
}

/// How to pick the partition for [`var_q_partition`].
#[derive(Clone, Debug, PartialEq)]
pub enum PartitionSpec {
    Points(Partition),
    Breakpoints,
    /// Breakpoints with `n` uniform points inserted into every piece.
    Refine(usize),
}

/// Riesz `q`-variation of `g` over a partition; points outside the nodes of `g` see its
/// constant extension.
pub fn var_q_partition(g: &PiecewiseLinear1D, q: f64, spec: &PartitionSpec) -> Result<VariationValue> {
    check_q(q)?;
    let xs: Vec<f64> = match spec {
        PartitionSpec::Points(p) => p.points().to_vec(),
        PartitionSpec::Breakpoints => g.xs().to_vec(),
        PartitionSpec::Refine(n) => {
            if g.xs().len() < 2 {
                g.xs().to_vec()
            } else {
                Partition::new(g.xs().to_vec())?.refine(*n).points().to_vec()
            }
        }
    };
    let ys: Vec<f64> = xs.iter().map(|&x| g.eval(x)).collect();
    Ok(VariationValue::finite(riesz_sum(&xs, &ys, q), q, 0.0))
}

/// `‖g'‖_{L^q} = (Σ |slope|^q · length)^{1/q}`.
pub fn riesz_derivative_norm(g: &PiecewiseLinear1D, q: f64) -> Result<f64> {
    check_q(q)?;
    let s = compensated_sum(
        g.slopes()
            .iter()
            .zip(g.xs().windows(2))
            .map(|(s, x)| s.abs().powf(q) * (x[1] - x[0])),
    );
    Ok(root(s, q))
}

/// Rounds of uniform halving before intervals may stop refining.
pub const ADAPTIVE_WARMUP_ROUNDS: usize = 4;

/// Largest number of refinement rounds of `var_q_adaptive`.
pub const MAX_ADAPTIVE_ROUNDS: usize = 48;

fn riesz_term(dx: f64, dy: f64, q: f64) -> f64 {
    if q == 1.0 {
        dy.abs()
    } else {
        dy.abs().powf(q) / dx.powf(q - 1.0)
    }
}

/// Riesz sum of a function known only through point evaluations, refined locally by
/// halving intervals.
///
/// Each round splits the active intervals and records how much each split raised the sum.
/// The run stops when a round raises the sum by at most `rel_tol` relative. After
/// [`ADAPTIVE_WARMUP_ROUNDS`] uniform rounds, the intervals with the smallest gains stop
/// refining as long as their gains add up to at most half of `rel_tol` times the sum.
/// Every partition gives a lower bound of `Var_q`. If the sum still grows after
/// [`MAX_ADAPTIVE_ROUNDS`] rounds, reaches [`MAX_ADAPTIVE_POINTS`] points or meets an
/// interval too short to split while its endpoint values differ, the result is flagged
/// `infinite` for `q > 1`.
pub fn var_q_adaptive(
    eval: impl Fn(&[f64]) -> Result<Vec<f64>>,
    initial: Vec<f64>,
    q: f64,
    rel_tol: f64,
) -> Result<VariationValue> {
    check_q(q)?;
    let mut xs = Partition::new(initial)?.0;
    let mut ys = eval(&xs)?;
    let mut active = vec![true; xs.len() - 1];
    let mut neglected = 0.0;
    for round in 0..MAX_ADAPTIVE_ROUNDS {
        let mids: Vec<f64> = xs
            .windows(2)
            .zip(&active)
            .filter(|(_, &a)| a)
            .map(|(w, _)| 0.5 * (w[0] + w[1]))
            .collect();
        let ym = eval(&mids)?;
        let n = xs.len() + mids.len();
        let (mut nx, mut ny, mut na) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
        // (gain, index of the left child in the new partition)
        let mut gains: Vec<(f64, usize)> = Vec::with_capacity(mids.len());
        let mut k = 0;
        let mut stuck = false;
        for i in 0..xs.len() - 1 {
            nx.push(xs[i]);
            ny.push(ys[i]);
            if !active[i] {
                na.push(false);
                continue;
            }
            let (m, ymid) = (mids[k], ym[k]);
            k += 1;
            if m > xs[i] && m < xs[i + 1] {
                let parent = riesz_term(xs[i + 1] - xs[i], ys[i + 1] - ys[i], q);
                let kids = riesz_term(m - xs[i], ymid - ys[i], q) + riesz_term(xs[i + 1] - m, ys[i + 1] - ymid, q);
                gains.push(((kids - parent).max(0.0), na.len()));
                nx.push(m);
                ny.push(ymid);
                na.push(true);
                na.push(true);
            } else {
                stuck |= ys[i + 1] != ys[i];
                na.push(false);
            }
        }
        nx.push(xs[xs.len() - 1]);
        ny.push(ys[ys.len() - 1]);
        xs = nx;
        ys = ny;
        active = na;
        let sum = riesz_sum(&xs, &ys, q);
        let grew: f64 = gains.iter().map(|g| g.0).sum();
        if stuck {
            break;
        }
        if gains.is_empty() || grew <= rel_tol * sum {
            return Ok(VariationValue::finite(sum, q, 0.0));
        }
        if xs.len() > MAX_ADAPTIVE_POINTS {
            break;
        }
        if round + 1 >= ADAPTIVE_WARMUP_ROUNDS {
            gains.sort_by(|a, b| a.0.total_cmp(&b.0));
            let budget = 0.5 * rel_tol * sum;
            for &(g, j) in &gains {
                if neglected + g > budget {
                    break;
                }
                neglected += g;
                active[j] = false;
                active[j + 1] = false;
            }
        }
    }
    let mut v = VariationValue::finite(riesz_sum(&xs, &ys, q), q, 0.0);
    v.infinite = q > 1.0;
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn delta() -> LatticeFunction {
        LatticeFunction::point_mass(&[0], 1.0).unwrap()
    }

    #[test]
    fn discrete_point_mass() {
        let w = EvaluationWindow::interval(-3, 3).unwrap();
        let v = var_q_discrete(&delta(), 1.0, &w).unwrap();
        assert_eq!((v.value, v.tail_bound), (2.0, 0.0));
        let v = var_q_discrete(&delta(), 2.0, &w).unwrap();
        assert!((v.value - 2f64.sqrt()).abs() < 1e-15);
        assert!(var_q_discrete(&delta(), 0.5, &w).is_err());
    }

    #[test]
    fn telescoping_window() {
        for wd in [1i64, 5, 40] {
            let w = EvaluationWindow::interval(-wd, wd).unwrap();
            let g = LatticeFunction::from_fn(&w, |n| 1.0 / (n[0].abs() as f64 + 1.0)).unwrap();
            let v = var_q_discrete(&g, 1.0, &w).unwrap();
            let expect = 2.0 * (1.0 - 1.0 / (wd as f64 + 1.0));
            assert!((v.value - expect).abs() < 1e-14);
            assert!((v.upper() - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn ramp() {
        let g = PiecewiseLinear1D::new(vec![0.0, 1.0], vec![0.0, 1.0]).unwrap();
        for q in [1.0, 2.0] {
            let v = var_q_partition(&g, q, &PartitionSpec::Breakpoints).unwrap();
            assert!((v.value - 1.0).abs() < 1e-15);
        }
        assert!((riesz_derivative_norm(&g, 2.0).unwrap() - 1.0).abs() < 1e-15);
        let p = Partition::new(vec![-1.0, 0.5, 3.0]).unwrap();
        let v = var_q_partition(&g, 1.0, &PartitionSpec::Points(p)).unwrap();
        assert!((v.value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn two_ramps() {
        let g = PiecewiseLinear1D::new(vec![0.0, 0.5, 1.0], vec![0.0, 1.0, 0.0]).unwrap();
        assert!((riesz_derivative_norm(&g, 2.0).unwrap() - 2.0).abs() < 1e-15);
        let v = var_q_partition(&g, 2.0, &PartitionSpec::Refine(7)).unwrap();
        assert!((v.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn partitions() {
        assert!(Partition::new(vec![0.0]).is_err());
        assert!(Partition::new(vec![0.0, 0.0]).is_err());
        let p = Partition::new(vec![0.0, 1.0]).unwrap().refine(3);
        assert_eq!(p.points(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<Partition>(&s).unwrap(), p);
    }

    #[test]
    fn adaptive_matches_smooth_integral() {
        // g(x) = x^2 on [0, 1]: ∫ |g'|^2 = 4/3
        let v = var_q_adaptive(
            |xs| Ok(xs.iter().map(|x| x.clamp(0.0, 1.0).powi(2)).collect()),
            vec![0.0, 1.0],
            2.0,
            1e-10,
        )
        .unwrap();
        assert!((v.value - (4.0f64 / 3.0).sqrt()).abs() < 1e-4);
        assert!(!v.infinite);
    }

    #[test]
    fn adaptive_flags_jumps() {
        let v = var_q_adaptive(
            |xs| Ok(xs.iter().map(|&x| if x < 0.3 { 0.0 } else { 1.0 }).collect()),
            vec![0.0, 1.0],
            2.0,
            1e-12,
        )
        .unwrap();
        assert!(v.infinite);
    }

    #[test]
    fn json_round_trip() {
        let v = VariationValue {
            value: 1.5,
            q: 2.0,
            tail_bound: 0.25,
            infinite: false,
        };
        assert_eq!(VariationValue::from_json(&v.to_json()).unwrap(), v);
    }
}
