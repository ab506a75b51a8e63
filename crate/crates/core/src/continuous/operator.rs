//! Uncentered fractional maximal function of a step function, evaluated exactly.
//!
//! For `u ≤ x ≤ v` the average `A(u, v) = (F(v) - F(u)) / (v - u)^{1-β}` has an affine
//! numerator on every product of breakpoint cells. Along each coordinate the only
//! stationary point is a minimum, so the supremum is attained with both endpoints in the
//! set of breakpoints together with `x` itself.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::functions::StepFunction1D;
use crate::error::{invalid_input, invalid_param, Result};
use crate::num::{value_key, Dd};

/// Value of `M̃_β f(x)` with the interval `[u, v]` attaining it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContValue {
    pub x: f64,
    pub value: f64,
    pub u: f64,
    pub v: f64,
}

#[derive(Clone, Copy, Debug)]
struct Cand {
    value: f64,
    u: f64,
    v: f64,
}

impl Cand {
    const NONE: Cand = Cand {
        value: f64::NEG_INFINITY,
        u: 0.0,
        v: 0.0,
    };

    /// Larger value, then shorter interval, then smaller left end.
    #[inline]
    fn beats(&self, o: &Cand) -> bool {
        let (a, b) = (value_key(self.value), value_key(o.value));
        if a != b {
            return a > b;
        }
        let (l0, l1) = (self.v - self.u, o.v - o.u);
        if l0 != l1 {
            return l0 < l1;
        }
        self.u < o.u
    }

    #[inline]
    fn offer(&mut self, c: Cand) {
        if c.beats(self) {
            *self = c;
        }
    }
}

/// Precomputed evaluator for `M̃_β f`.
#[derive(Clone, Debug)]
pub struct FracMaxCont {
    knots: Vec<f64>,
    heights: Vec<f64>,
    prefix: Vec<Dd>,
    gamma: f64,
    /// Best knot pair `(t_I, t_J)` with `I ≤ k < J`, per cell `k`.
    cell_best: Vec<Cand>,
}

impl FracMaxCont {
    pub fn new(f: &StepFunction1D, beta: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&beta) {
            return Err(invalid_param(format!("beta = {beta} must lie in [0, 1)")));
        }
        let g = f.abs();
        let knots = g.breakpoints().to_vec();
        let heights = g.values().to_vec();
        let prefix = g.knot_integrals();
        let gamma = 1.0 - beta;
        let m = heights.len();
        let mut cell_best = vec![Cand::NONE; m];
        for i in 0..m {
            let mut cur = Cand::NONE;
            for j in (i + 1..=m).rev() {
                let mass = (prefix[j] - prefix[i]).value().max(0.0);
                cur.offer(Cand {
                    value: mass / (knots[j] - knots[i]).powf(gamma),
                    u: knots[i],
                    v: knots[j],
                });
                cell_best[j - 1].offer(cur);
            }
        }
        Ok(FracMaxCont {
            knots,
            heights,
            prefix,
            gamma,
            cell_best,
        })
    }

    fn integral_to(&self, x: f64) -> Dd {
        let p = self.knots.partition_point(|&t| t <= x);
        if p == 0 {
            Dd::ZERO
        } else if p == self.knots.len() {
            self.prefix[p - 1]
        } else {
            self.prefix[p - 1].add_f64(self.heights[p - 1] * (x - self.knots[p - 1]))
        }
    }

    pub fn eval(&self, x: f64) -> ContValue {
        let m = self.heights.len();
        let p = self.knots.partition_point(|&t| t <= x);
        let mut best = Cand {
            value: 0.0,
            u: x,
            v: x,
        };
        if p >= 1 {
            let k = p - 1;
            if k < m {
                best.offer(self.cell_best[k]);
            }
            if self.knots[k] == x && k >= 1 {
                best.offer(self.cell_best[k - 1]);
            }
        }
        let fx = self.integral_to(x);
        for i in 0..p {
            let t = self.knots[i];
            if t < x {
                let mass = (fx - self.prefix[i]).value().max(0.0);
                best.offer(Cand {
                    value: mass / (x - t).powf(self.gamma),
                    u: t,
                    v: x,
                });
            }
        }
        for j in p..self.knots.len() {
            let t = self.knots[j];
            let mass = (self.prefix[j] - fx).value().max(0.0);
            best.offer(Cand {
                value: mass / (t - x).powf(self.gamma),
                u: x,
                v: t,
            });
        }
        ContValue {
            x,
            value: best.value,
            u: best.u,
            v: best.v,
        }
    }

    /// `(F(v) - F(u)) / (v - u)^{1-β}` for the absolute value of the input; zero when `u = v`.
    pub fn average(&self, u: f64, v: f64) -> f64 {
        if v <= u {
            return 0.0;
        }
        let mass = (self.integral_to(v) - self.integral_to(u)).value().max(0.0);
        mass / (v - u).powf(self.gamma)
    }

    pub fn eval_many(&self, xs: &[f64]) -> Vec<ContValue> {
        xs.par_iter().map(|&x| self.eval(x)).collect()
    }
}

/// `M̃_β f` at sorted query points, with the optimal interval at each.
pub fn frac_max_cont(f: &StepFunction1D, beta: f64, queries: &[f64]) -> Result<Vec<ContValue>> {
    if queries.iter().any(|x| !x.is_finite()) {
        return Err(invalid_input("query points must be finite"));
    }
    if queries.windows(2).any(|w| w[0] > w[1]) {
        return Err(invalid_input("query points must be sorted"));
    }
    Ok(FracMaxCont::new(f, beta)?.eval_many(queries))
}
