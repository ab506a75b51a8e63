//! Uncentered operator `M̃_{Ω,β}`: supremum over balls `Ω̄_r(x0)` containing `n`.
//!
//! In one dimension lattice balls are integer intervals and the operator is exact. In higher
//! dimensions the centers range over the refined lattice `(1/K) Z^d`, which yields a lower
//! bound of the supremum over all real centers.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::boxsum::BoxSums;
use super::one_dim::uncentered_windows;
use super::{
    assemble, check_beta, check_window, max_cover_radius, Best, Certificate, MaximalResult, Mode,
};
use crate::error::{check_dim, invalid_param, Result};
use crate::lattice::{advance, EvaluationWindow, LatticeFunction};
use crate::num::{pow_count, value_key};
use crate::omega::{ConvexBody, SortedBall, BOUNDARY_TOL};

/// Uncentered fractional maximal function with centers on `(1/K) Z^d`.
///
/// For `d = 1` the result is exact and independent of `K`. For `d >= 2` the result is flagged
/// as a lower bound; refining `K` to a multiple never decreases it.
pub fn frac_max_nd_uncentered(
    f: &LatticeFunction,
    body: &ConvexBody,
    beta: f64,
    window: &EvaluationWindow,
    center_refine: u32,
) -> Result<MaximalResult> {
    let d = f.dim();
    check_dim(d, body.dim())?;
    check_window(f, window)?;
    check_beta(beta, d)?;
    if center_refine < 1 {
        return Err(invalid_param("center refinement K must be >= 1"));
    }
    if d == 1 {
        return interval_operator(f, body, beta, window);
    }
    let wlen = window.len();
    let Some((slo, shi)) = f.support_hull() else {
        let best = window
            .points()
            .map(|n| Best {
                value: 0.0,
                r: 0.0,
                center: n.iter().map(|&v| v as f64).collect(),
            })
            .collect();
        return assemble(window, best, beta, Mode::Uncentered, false);
    };
    let grid = if body.is_cube() && d <= 8 {
        cube_operator(f, beta, window, center_refine, &slo, &shi)
    } else {
        generic_operator(f, body, beta, window, center_refine, &slo, &shi)?
    };
    debug_assert_eq!(grid.len(), wlen);
    assemble(window, grid, beta, Mode::Uncentered, false)
}

fn interval_operator(
    f: &LatticeFunction,
    body: &ConvexBody,
    beta: f64,
    window: &EvaluationWindow,
) -> Result<MaximalResult> {
    let (wlo, whi) = (window.lo()[0], window.hi()[0]);
    let wins = uncentered_windows(f, beta, wlo, whi);
    let alpha = -body.extent_lo()[0];
    let gamma = body.extent_hi()[0];
    let values = wins.iter().map(|w| w.value).collect();
    let certificates = (wlo..=whi)
        .zip(&wins)
        .map(|(n, w)| {
            let u = (n - w.left as i64) as f64;
            let rho = (w.left + w.right) as f64 / (alpha + gamma);
            Certificate {
                n: vec![n],
                x0: vec![u + alpha * rho],
                r: rho,
                window: Some([w.left, w.right]),
            }
        })
        .collect();
    Ok(MaximalResult {
        values: LatticeFunction::new(vec![wlo], vec![whi], values)?,
        certificates,
        beta,
        mode: Mode::Uncentered,
        exact: true,
    })
}

fn phases(d: usize, k: u32) -> Vec<Vec<f64>> {
    let total = (k as usize).pow(d as u32);
    (0..total)
        .map(|mut idx| {
            let mut phi = vec![0.0; d];
            for i in (0..d).rev() {
                phi[i] = (idx % k as usize) as f64 / k as f64;
                idx /= k as usize;
            }
            phi
        })
        .collect()
}

fn flat_index(p: &[i64], lo: &[i64], strides: &[usize]) -> usize {
    p.iter()
        .zip(lo)
        .zip(strides)
        .map(|((a, b), s)| (a - b) as usize * s)
        .sum()
}

fn strides_of(ext: &[usize]) -> Vec<usize> {
    let d = ext.len();
    let mut s = vec![1usize; d];
    for i in (0..d.saturating_sub(1)).rev() {
        s[i] = s[i + 1] * ext[i + 1];
    }
    s
}

fn merge_grids(mut a: Vec<Best>, b: Vec<Best>) -> Vec<Best> {
    for (x, y) in a.iter_mut().zip(&b) {
        x.merge(y);
    }
    a
}

/// Scans every center `z + φ` (`z` integer, `φ` a phase), evaluating all ball radii at once
/// from the gauge-sorted enumeration of lattice points around `φ`.
fn generic_operator(
    f: &LatticeFunction,
    body: &ConvexBody,
    beta: f64,
    window: &EvaluationWindow,
    k: u32,
    slo: &[i64],
    shi: &[i64],
) -> Result<Vec<Best>> {
    let d = f.dim();
    let e = 1.0 - beta / d as f64;
    let f = f.trimmed();
    let (wlo, whi) = (window.lo(), window.hi());
    let wext: Vec<usize> = (0..d).map(|i| (whi[i] - wlo[i] + 1) as usize).collect();
    let wstr = strides_of(&wext);
    let wlen = window.len();
    // balls around n with at most as many points as the covering centered ball suffice
    let r_max = max_cover_radius(body, window, slo, shi);
    let mut grid = vec![Best::empty(d); wlen];
    for phi in phases(d, k) {
        let neg: Vec<f64> = phi.iter().map(|v| -v).collect();
        let r_phi = r_max + body.gauge(&neg)?;
        let ball = SortedBall::new(body, &phi, r_phi)?;
        if ball.is_empty() {
            continue;
        }
        let mut olo = vec![i64::MAX; d];
        let mut ohi = vec![i64::MIN; d];
        for i in 0..ball.len() {
            let p = ball.point(i);
            for c in 0..d {
                olo[c] = olo[c].min(p[c]);
                ohi[c] = ohi[c].max(p[c]);
            }
        }
        let oext: Vec<usize> = (0..d).map(|i| (ohi[i] - olo[i] + 1) as usize).collect();
        let ostr = strides_of(&oext);
        let mut group_of = vec![u32::MAX; oext.iter().product()];
        for j in 0..ball.group_count() {
            let start = if j == 0 { 0 } else { ball.group_end(j - 1) };
            for i in start..ball.group_end(j) {
                group_of[flat_index(ball.point(i), &olo, &ostr)] = j as u32;
            }
        }
        let zlo: Vec<i64> = (0..d)
            .map(|i| (slo[i] - ohi[i]).max(wlo[i] - ohi[i]))
            .collect();
        let zhi: Vec<i64> = (0..d)
            .map(|i| (shi[i] - olo[i]).min(whi[i] - olo[i]))
            .collect();
        if (0..d).any(|i| zlo[i] > zhi[i]) {
            continue;
        }
        let centers: Vec<Vec<i64>> = EvaluationWindow::new(zlo, zhi)?.points().collect();
        let part = centers
            .par_iter()
            .fold(
                || vec![Best::empty(d); wlen],
                |mut g, z| {
                    scan_center(
                        &f, &ball, &group_of, &olo, &ohi, &ostr, z, &phi, window, &wstr, e,
                        &mut g,
                    );
                    g
                },
            )
            .reduce(|| vec![Best::empty(d); wlen], merge_grids);
        grid = merge_grids(grid, part);
    }
    Ok(grid)
}

#[allow(clippy::too_many_arguments)]
fn scan_center(
    f: &LatticeFunction,
    ball: &SortedBall,
    group_of: &[u32],
    olo: &[i64],
    ohi: &[i64],
    ostr: &[usize],
    z: &[i64],
    phi: &[f64],
    window: &EvaluationWindow,
    wstr: &[usize],
    e: f64,
    grid: &mut [Best],
) {
    let d = z.len();
    let groups = ball.group_count();
    let mut m = vec![0i64; d];
    let mut acc = 0.0;
    let mut start = 0;
    let mut avg = Vec::with_capacity(groups);
    for j in 0..groups {
        let end = ball.group_end(j);
        for i in start..end {
            let off = ball.point(i);
            for c in 0..d {
                m[c] = z[c] + off[c];
            }
            acc += f.get(&m).abs();
        }
        start = end;
        avg.push(acc / pow_count(end as f64, e));
    }
    if acc == 0.0 {
        return;
    }
    // suffix maxima, ties resolved towards the smaller radius
    let mut suf = vec![(0.0f64, 0usize); groups];
    let mut cur = (f64::NEG_INFINITY, groups);
    for j in (0..groups).rev() {
        if value_key(avg[j]) >= value_key(cur.0) {
            cur = (avg[j], j);
        }
        suf[j] = cur;
    }
    let center: Vec<f64> = (0..d).map(|c| z[c] as f64 + phi[c]).collect();
    let (wlo, whi) = (window.lo(), window.hi());
    let lo: Vec<i64> = (0..d).map(|c| wlo[c].max(z[c] + olo[c])).collect();
    let hi: Vec<i64> = (0..d).map(|c| whi[c].min(z[c] + ohi[c])).collect();
    if (0..d).any(|c| lo[c] > hi[c]) {
        return;
    }
    let mut n = lo.clone();
    let mut o = vec![0i64; d];
    loop {
        for c in 0..d {
            o[c] = n[c] - z[c];
        }
        let g = group_of[flat_index(&o, olo, ostr)];
        if g != u32::MAX {
            let (val, j) = suf[g as usize];
            grid[flat_index(&n, wlo, wstr)].offer(val, ball.group_radius(j), &center);
        }
        if !advance(&mut n, &lo, &hi) {
            break;
        }
    }
}

struct ShapeRep {
    rho: f64,
    center_offset: Vec<f64>,
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x != y {
            return x < y;
        }
    }
    false
}

/// Cube balls are integer boxes: enumerate the achievable box shapes, compute all box sums
/// of each shape from a summed-area table, and take separable sliding maxima over the
/// boxes containing each point.
fn cube_operator(
    f: &LatticeFunction,
    beta: f64,
    window: &EvaluationWindow,
    k: u32,
    slo: &[i64],
    shi: &[i64],
) -> Vec<Best> {
    let d = f.dim();
    let e = 1.0 - beta / d as f64;
    let (wlo, whi) = (window.lo(), window.hi());
    let span: Vec<i64> = (0..d)
        .map(|i| whi[i].max(shi[i]) - wlo[i].min(slo[i]) + 1)
        .collect();
    let t_max = span.iter().copied().max().unwrap_or(1) + 3;
    let mut shapes: BTreeMap<Vec<i64>, ShapeRep> = BTreeMap::new();
    for phi in phases(d, k) {
        let rho0 = phi
            .iter()
            .map(|&p| if p == 0.0 { 0.0 } else { p.min(1.0 - p) })
            .fold(0.0, f64::max);
        let mut radii: Vec<f64> = Vec::new();
        for &p in &phi {
            for t in 0..=t_max {
                radii.push(p + t as f64);
                if p != 0.0 {
                    radii.push(1.0 - p + t as f64);
                }
            }
        }
        radii.retain(|&r| r + BOUNDARY_TOL >= rho0);
        radii.sort_by(f64::total_cmp);
        radii.dedup_by(|a, b| (*a - *b).abs() <= BOUNDARY_TOL);
        for rho in radii {
            let lo: Vec<i64> = phi
                .iter()
                .map(|&p| (p - rho - BOUNDARY_TOL).ceil() as i64)
                .collect();
            let hi: Vec<i64> = phi
                .iter()
                .map(|&p| (p + rho + BOUNDARY_TOL).floor() as i64)
                .collect();
            let len: Vec<i64> = (0..d).map(|i| hi[i] - lo[i] + 1).collect();
            if len.iter().any(|&l| l < 1) {
                continue;
            }
            if (0..d).all(|i| len[i] >= span[i] + 2) {
                break;
            }
            let offset: Vec<f64> = (0..d).map(|i| phi[i] - lo[i] as f64).collect();
            let replace = match shapes.get(&len) {
                None => true,
                Some(rep) => rho < rep.rho || (rho == rep.rho && lex_less(&offset, &rep.center_offset)),
            };
            if replace {
                shapes.insert(
                    len,
                    ShapeRep {
                        rho,
                        center_offset: offset,
                    },
                );
            }
        }
    }
    let bs = BoxSums::new(f);
    let wlen = window.len();
    let shapes: Vec<(Vec<i64>, ShapeRep)> = shapes.into_iter().collect();
    shapes
        .par_iter()
        .fold(
            || vec![Best::empty(d); wlen],
            |mut g, (len, rep)| {
                shape_pass(&bs, len, rep, window, slo, shi, e, &mut g);
                g
            },
        )
        .reduce(|| vec![Best::empty(d); wlen], merge_grids)
}

#[allow(clippy::too_many_arguments)]
fn shape_pass(
    bs: &BoxSums,
    len: &[i64],
    rep: &ShapeRep,
    window: &EvaluationWindow,
    slo: &[i64],
    shi: &[i64],
    e: f64,
    grid: &mut [Best],
) {
    let d = len.len();
    let (wlo, whi) = (window.lo(), window.hi());
    // lower corners of boxes that meet both the support and the window
    let plo: Vec<i64> = (0..d)
        .map(|i| (wlo[i] - len[i] + 1).max(slo[i] - len[i] + 1))
        .collect();
    let phi: Vec<i64> = (0..d).map(|i| whi[i].min(shi[i])).collect();
    if (0..d).any(|i| plo[i] > phi[i]) {
        return;
    }
    let pext: Vec<usize> = (0..d).map(|i| (phi[i] - plo[i] + 1) as usize).collect();
    let total: usize = pext.iter().product();
    let mut cur: Vec<(f64, u32)> = Vec::with_capacity(total);
    let mut p = plo.clone();
    let mut q = vec![0i64; d];
    let mut idx = 0u32;
    loop {
        for i in 0..d {
            q[i] = p[i] + len[i] - 1;
        }
        cur.push((bs.sum(&p, &q), idx));
        idx += 1;
        if !advance(&mut p, &plo, &phi) {
            break;
        }
    }
    let mut ext = pext.clone();
    let mut origin = plo.clone();
    for axis in (0..d).rev() {
        let wl = (whi[axis] - wlo[axis] + 1) as usize;
        let mut next_ext = ext.clone();
        next_ext[axis] = wl;
        let cs = strides_of(&ext);
        let ns = strides_of(&next_ext);
        let next_total: usize = next_ext.iter().product();
        let mut next = vec![(-1.0f64, 0u32); next_total];
        let lines = next_total / wl;
        let mut deque: std::collections::VecDeque<usize> = std::collections::VecDeque::new();
        for line in 0..lines {
            // decompose `line` over the axes other than `axis`
            let mut rem = line;
            let mut cbase = 0;
            let mut nbase = 0;
            for i in (0..d).rev() {
                if i == axis {
                    continue;
                }
                let c = rem % next_ext[i];
                rem /= next_ext[i];
                cbase += c * cs[i];
                nbase += c * ns[i];
            }
            deque.clear();
            let pl = ext[axis] as i64;
            let mut pushed = 0i64;
            for t in 0..wl {
                let n = wlo[axis] + t as i64;
                // admit corners p <= n
                let upto = (n - origin[axis]).min(pl - 1);
                while pushed <= upto {
                    let v = cur[cbase + pushed as usize * cs[axis]];
                    if v.0 >= 0.0 {
                        while let Some(&b) = deque.back() {
                            if value_key(cur[cbase + b * cs[axis]].0) < value_key(v.0) {
                                deque.pop_back();
                            } else {
                                break;
                            }
                        }
                        deque.push_back(pushed as usize);
                    }
                    pushed += 1;
                }
                // drop corners p < n - len + 1
                let min_p = n - len[axis] + 1 - origin[axis];
                while let Some(&fr) = deque.front() {
                    if (fr as i64) < min_p {
                        deque.pop_front();
                    } else {
                        break;
                    }
                }
                if let Some(&fr) = deque.front() {
                    next[nbase + t * ns[axis]] = cur[cbase + fr * cs[axis]];
                }
            }
        }
        cur = next;
        ext = next_ext;
        origin[axis] = wlo[axis];
    }
    let count: f64 = len.iter().map(|&l| l as f64).product();
    let norm = pow_count(count, e);
    let pstr = strides_of(&pext);
    let mut center = vec![0.0; d];
    for (gi, &(sum, arg)) in cur.iter().enumerate() {
        if sum < 0.0 {
            continue;
        }
        let mut rem = arg as usize;
        for i in 0..d {
            let c = rem / pstr[i];
            rem %= pstr[i];
            center[i] = (plo[i] + c as i64) as f64 + rep.center_offset[i];
        }
        grid[gi].offer(sum / norm, rep.rho, &center);
    }
}
