//! One-dimensional operators over integer windows `[n - r, n + s]`.

use super::boxsum::Prefix1d;
use super::{check_beta, check_window, Certificate, MaximalResult, Mode};
use crate::error::{invalid_input, Result};
use crate::lattice::{EvaluationWindow, LatticeFunction};
use crate::num::{pow_count, value_key};

/// Winning window at one point: value and offsets `(left, right)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Win {
    pub value: f64,
    pub left: u64,
    pub right: u64,
}

impl Win {
    const ZERO: Win = Win {
        value: 0.0,
        left: 0,
        right: 0,
    };

    /// Larger value, then shorter window, then smaller `left`.
    #[inline]
    fn loses_to(&self, o: &Win) -> bool {
        let (a, b) = (value_key(o.value), value_key(self.value));
        if a != b {
            return a > b;
        }
        let (l0, l1) = (self.left + self.right, o.left + o.right);
        if l0 != l1 {
            return l1 < l0;
        }
        o.left < self.left
    }
}

struct Weights {
    gamma: f64,
    cache: Vec<f64>,
}

impl Weights {
    fn new(gamma: f64, max_len: usize) -> Self {
        let cache = (0..=max_len)
            .map(|l| if l == 0 { 1.0 } else { pow_count(l as f64, gamma) })
            .collect();
        Weights { gamma, cache }
    }

    #[inline]
    fn get(&self, len: u64) -> f64 {
        self.cache
            .get(len as usize)
            .copied()
            .unwrap_or_else(|| pow_count(len as f64, self.gamma))
    }
}

fn check_1d(f: &LatticeFunction, beta: f64, window: &EvaluationWindow) -> Result<()> {
    if f.dim() != 1 {
        return Err(invalid_input(format!(
            "one-dimensional operator called with a {}-dimensional function",
            f.dim()
        )));
    }
    check_window(f, window)?;
    check_beta(beta, 1)
}

/// Exact uncentered windows for every point of `[wlo, whi]`.
pub(crate) fn uncentered_windows(f: &LatticeFunction, beta: f64, wlo: i64, whi: i64) -> Vec<Win> {
    let width = (whi - wlo + 1) as usize;
    let Some((slo, shi)) = f.support_hull() else {
        return vec![Win::ZERO; width];
    };
    let (a, b) = (slo[0], shi[0]);
    let vals: Vec<f64> = (a..=b).map(|k| f.get(&[k])).collect();
    let pre = Prefix1d::new(a, &vals);
    let gamma = 1.0 - beta;
    let max_len = (whi.max(b) - wlo.min(a) + 1) as usize;
    let w = Weights::new(gamma, max_len);
    let s = (b - a + 1) as usize;

    // inside the support hull: only windows inside [a, b] can be optimal
    let mut inside = vec![
        Win {
            value: f64::NEG_INFINITY,
            left: 0,
            right: 0
        };
        s
    ];
    for u in a..=b {
        let mut cur_val = f64::NEG_INFINITY;
        let mut cur_v = b;
        for v in (u..=b).rev() {
            let val = pre.sum(u, v) / w.get((v - u + 1) as u64);
            if value_key(val) >= value_key(cur_val) {
                cur_val = val;
                cur_v = v;
            }
            let cand = Win {
                value: cur_val,
                left: (v - u) as u64,
                right: (cur_v - v) as u64,
            };
            let slot = &mut inside[(v - a) as usize];
            if slot.loses_to(&cand) {
                *slot = cand;
            }
        }
    }

    (wlo..=whi)
        .map(|n| {
            if n >= a && n <= b {
                inside[(n - a) as usize]
            } else if n > b {
                let mut best = Win {
                    value: f64::NEG_INFINITY,
                    left: 0,
                    right: 0,
                };
                for u in (a..=b).rev() {
                    let val = pre.sum(u, b) / w.get((n - u + 1) as u64);
                    if value_key(val) > value_key(best.value) {
                        best = Win {
                            value: val,
                            left: (n - u) as u64,
                            right: 0,
                        };
                    }
                }
                best
            } else {
                let mut best = Win {
                    value: f64::NEG_INFINITY,
                    left: 0,
                    right: 0,
                };
                for v in a..=b {
                    let val = pre.sum(a, v) / w.get((v - n + 1) as u64);
                    if value_key(val) > value_key(best.value) {
                        best = Win {
                            value: val,
                            left: 0,
                            right: (v - n) as u64,
                        };
                    }
                }
                best
            }
        })
        .collect()
}

fn result_1d(wlo: i64, whi: i64, wins: Vec<Win>, beta: f64, mode: Mode) -> Result<MaximalResult> {
    let values = wins.iter().map(|w| w.value).collect();
    let certificates = (wlo..=whi)
        .zip(&wins)
        .map(|(n, w)| Certificate {
            n: vec![n],
            x0: vec![n as f64 + (w.right as f64 - w.left as f64) / 2.0],
            r: (w.left + w.right) as f64 / 2.0,
            window: Some([w.left, w.right]),
        })
        .collect();
    Ok(MaximalResult {
        values: LatticeFunction::new(vec![wlo], vec![whi], values)?,
        certificates,
        beta,
        mode,
        exact: true,
    })
}

/// `M̃_β f(n) = sup_{r,s >= 0} (r+s+1)^{β-1} Σ_{k=-r}^{s} |f(n+k)|` on the window.
///
/// Certificates carry the winning window: the shortest one, then the one with the
/// smallest left extent.
pub fn frac_max_1d_uncentered(
    f: &LatticeFunction,
    beta: f64,
    window: &EvaluationWindow,
) -> Result<MaximalResult> {
    check_1d(f, beta, window)?;
    let (wlo, whi) = (window.lo()[0], window.hi()[0]);
    let wins = uncentered_windows(f, beta, wlo, whi);
    result_1d(wlo, whi, wins, beta, Mode::Uncentered)
}

/// Centered variant over symmetric windows `[n - r, n + r]` with weight `(2r+1)^{β-1}`.
pub fn frac_max_1d_centered(
    f: &LatticeFunction,
    beta: f64,
    window: &EvaluationWindow,
) -> Result<MaximalResult> {
    check_1d(f, beta, window)?;
    let (wlo, whi) = (window.lo()[0], window.hi()[0]);
    let wins = match f.support_hull() {
        None => vec![Win::ZERO; (whi - wlo + 1) as usize],
        Some((slo, shi)) => {
            let (a, b) = (slo[0], shi[0]);
            let vals: Vec<f64> = (a..=b).map(|k| f.get(&[k])).collect();
            let pre = Prefix1d::new(a, &vals);
            let cover = ((whi - a).abs().max((b - wlo).abs()) as usize).max((b - a) as usize);
            let w = Weights::new(1.0 - beta, 2 * cover + 1);
            (wlo..=whi)
                .map(|n| {
                    let reach = (n - a).abs().max((b - n).abs()) as u64;
                    let mut best = Win {
                        value: f64::NEG_INFINITY,
                        left: 0,
                        right: 0,
                    };
                    for r in 0..=reach {
                        let ri = r as i64;
                        let val = pre.sum(n - ri, n + ri) / w.get(2 * r + 1);
                        if value_key(val) > value_key(best.value) {
                            best = Win {
                                value: val,
                                left: r,
                                right: r,
                            };
                        }
                    }
                    best
                })
                .collect()
        }
    };
    result_1d(wlo, whi, wins, beta, Mode::Centered)
}
