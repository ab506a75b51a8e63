//! Centered operator `M_{Ω,β}` in any dimension.

use rayon::prelude::*;

use super::boxsum::BoxSums;
use super::{
    assemble, check_beta, check_window, cover_radius, max_cover_radius, Best, MaximalResult, Mode,
};
use crate::error::{check_dim, Result};
use crate::lattice::{EvaluationWindow, LatticeFunction};
use crate::num::{pow_count, value_key};
use crate::omega::{ConvexBody, SortedBall, BOUNDARY_TOL};

/// `M_{Ω,β} f(n) = sup_r N(r)^{-1+β/d} Σ_{m ∈ Ω̄_r} |f(n+m)|` on the window.
///
/// Candidate radii are the gauge values of lattice offsets up to the radius at which the
/// ball around `n` covers the support of `f`; larger balls only add points. The certificate
/// holds the smallest optimal radius.
pub fn frac_max_nd_centered(
    f: &LatticeFunction,
    body: &ConvexBody,
    beta: f64,
    window: &EvaluationWindow,
) -> Result<MaximalResult> {
    let d = f.dim();
    check_dim(d, body.dim())?;
    check_window(f, window)?;
    check_beta(beta, d)?;
    let points: Vec<Vec<i64>> = window.points().collect();
    let Some((slo, shi)) = f.support_hull() else {
        let best = points
            .iter()
            .map(|n| Best {
                value: 0.0,
                r: 0.0,
                center: n.iter().map(|&v| v as f64).collect(),
            })
            .collect();
        return assemble(window, best, beta, Mode::Centered, true);
    };
    let e = 1.0 - beta / d as f64;
    let best: Vec<Best> = if body.is_cube() && d <= 8 {
        let bs = BoxSums::new(f);
        points
            .par_iter()
            .map(|n| {
                let reach = (0..d)
                    .map(|i| (n[i] - slo[i]).abs().max((shi[i] - n[i]).abs()))
                    .max()
                    .unwrap_or(0);
                let mut a = vec![0i64; d];
                let mut b = vec![0i64; d];
                let mut best = (f64::NEG_INFINITY, 0i64);
                for j in 0..=reach {
                    for i in 0..d {
                        a[i] = n[i] - j;
                        b[i] = n[i] + j;
                    }
                    let count = ((2 * j + 1) as f64).powi(d as i32);
                    let val = bs.sum(&a, &b) / pow_count(count, e);
                    if value_key(val) > value_key(best.0) {
                        best = (val, j);
                    }
                }
                Best {
                    value: best.0,
                    r: best.1 as f64,
                    center: n.iter().map(|&v| v as f64).collect(),
                }
            })
            .collect()
    } else {
        let r_max = max_cover_radius(body, window, &slo, &shi);
        let ball = SortedBall::new(body, &vec![0.0; d], r_max)?;
        let trimmed = f.trimmed();
        points
            .par_iter()
            .map(|n| centered_walk(&trimmed, body, &ball, n, &slo, &shi, e))
            .collect()
    };
    assemble(window, best, beta, Mode::Centered, true)
}

fn centered_walk(
    f: &LatticeFunction,
    body: &ConvexBody,
    ball: &SortedBall,
    n: &[i64],
    slo: &[i64],
    shi: &[i64],
    e: f64,
) -> Best {
    let d = n.len();
    let cover = cover_radius(body, n, slo, shi);
    let mut m = vec![0i64; d];
    let mut acc = 0.0;
    let mut start = 0;
    let mut best = (f64::NEG_INFINITY, 0.0);
    for j in 0..ball.group_count() {
        let end = ball.group_end(j);
        for i in start..end {
            let off = ball.point(i);
            for k in 0..d {
                m[k] = n[k] + off[k];
            }
            acc += f.get(&m).abs();
        }
        start = end;
        let val = acc / pow_count(end as f64, e);
        let r = ball.group_radius(j);
        if value_key(val) > value_key(best.0) {
            best = (val, r);
        }
        if r + BOUNDARY_TOL >= cover {
            break;
        }
    }
    Best {
        value: best.0,
        r: best.1,
        center: n.iter().map(|&v| v as f64).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_mass_in_the_plane() {
        let f = LatticeFunction::point_mass(&[0, 0], 1.0).unwrap();
        let w = EvaluationWindow::cube(2, 3).unwrap();
        for body in [ConvexBody::linf(2).unwrap(), ConvexBody::cube_polytope(2).unwrap()] {
            let m = frac_max_nd_centered(&f, &body, 0.0, &w).unwrap();
            assert!((m.value_at(&[1, 0]).unwrap() - 1.0 / 9.0).abs() < 1e-15);
            assert_eq!(m.certificate_at(&[1, 0]).unwrap().r, 1.0);
            assert_eq!(m.value_at(&[0, 0]), Some(1.0));
            let m = frac_max_nd_centered(&f, &body, 1.0, &w).unwrap();
            assert!((m.value_at(&[1, 0]).unwrap() - 1.0 / 3.0).abs() < 1e-15);
            let m = frac_max_nd_centered(&f, &body, 1.7, &w).unwrap();
            assert_eq!(m.value_at(&[0, 0]), Some(1.0));
        }
    }

    #[test]
    fn beta_range() {
        let f = LatticeFunction::point_mass(&[0, 0], 1.0).unwrap();
        let w = EvaluationWindow::cube(2, 1).unwrap();
        let b = ConvexBody::euclidean(2).unwrap();
        assert!(frac_max_nd_centered(&f, &b, 2.0, &w).is_err());
    }
}
