//! Brute-force reference implementations shared by the integration tests.
//!
//! Everything here works straight from the definitions with plain loops and the public
//! gauge, without the prefix sums, sorted enumerations or tail arguments of the library.

#![allow(dead_code)]

use fracmax::lattice::LatticeFunction;
use fracmax::omega::ConvexBody;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const MEMBER_TOL: f64 = 1e-12;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
}

/// Random 1-D function with support length in `1..=max_len`; some zero and negative entries.
pub fn random_1d(rng: &mut ChaCha8Rng, max_len: usize) -> LatticeFunction {
    let len = rng.gen_range(1..=max_len);
    let start = rng.gen_range(-6..=6);
    let mut vals: Vec<f64> = (0..len)
        .map(|_| match rng.gen_range(0..10) {
            0 => 0.0,
            1 => -rng.gen::<f64>(),
            2 => 1.0,
            _ => rng.gen::<f64>(),
        })
        .collect();
    if vals.iter().all(|&v| v == 0.0) {
        vals[0] = 0.5;
    }
    LatticeFunction::from_slice_1d(start, &vals).unwrap()
}

/// Random 2-D function on a box of side `1..=max_side`.
pub fn random_2d(rng: &mut ChaCha8Rng, max_side: i64) -> LatticeFunction {
    let w = rng.gen_range(1..=max_side);
    let h = rng.gen_range(1..=max_side);
    let x = rng.gen_range(-3..=3);
    let y = rng.gen_range(-3..=3);
    let mut vals: Vec<f64> = (0..w * h)
        .map(|_| match rng.gen_range(0..6) {
            0 => 0.0,
            1 => 1.0,
            _ => rng.gen::<f64>(),
        })
        .collect();
    if vals.iter().all(|&v| v == 0.0) {
        vals[0] = 1.0;
    }
    LatticeFunction::new(vec![x, y], vec![x + w - 1, y + h - 1], vals).unwrap()
}

fn support_range_1d(f: &LatticeFunction) -> (i64, i64) {
    (f.box_lo()[0], f.box_hi()[0])
}

/// Maximum over every window `[u, v] ∋ n` with endpoints in a generous range.
pub fn brute_uncentered_1d(f: &LatticeFunction, beta: f64, n: i64) -> f64 {
    let (a, b) = support_range_1d(f);
    let lo = a.min(n) - 3;
    let hi = b.max(n) + 3;
    let mut best = 0.0f64;
    for u in lo..=n {
        for v in n..=hi {
            let s: f64 = (u..=v).map(|k| f.get(&[k]).abs()).sum();
            let w = ((v - u + 1) as f64).powf(1.0 - beta);
            best = best.max(s / w);
        }
    }
    best
}

pub fn brute_centered_1d(f: &LatticeFunction, beta: f64, n: i64) -> f64 {
    let (a, b) = support_range_1d(f);
    let reach = (n - a).abs().max((b - n).abs()) + 3;
    let mut best = 0.0f64;
    for r in 0..=reach {
        let s: f64 = (n - r..=n + r).map(|k| f.get(&[k]).abs()).sum();
        best = best.max(s / ((2 * r + 1) as f64).powf(1.0 - beta));
    }
    best
}

fn gauge_of(body: &ConvexBody, m: &[i64], c: &[f64]) -> f64 {
    let y: Vec<f64> = m.iter().zip(c).map(|(&a, &b)| a as f64 - b).collect();
    body.gauge(&y).unwrap()
}

/// Lattice points of a box around `c` wide enough for radius `r`.
fn scan(c: &[f64], r: f64) -> Vec<Vec<i64>> {
    let d = c.len();
    // every body in the tests has its unit ball inside [-1, 1]^d … [-2, 2]^d
    let lo: Vec<i64> = c.iter().map(|&x| (x - 2.0 * r).floor() as i64 - 1).collect();
    let hi: Vec<i64> = c.iter().map(|&x| (x + 2.0 * r).ceil() as i64 + 1).collect();
    let mut out = Vec::new();
    let mut p = lo.clone();
    loop {
        out.push(p.clone());
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if p[i] < hi[i] {
                p[i] += 1;
                break;
            }
            p[i] = lo[i];
        }
    }
}

pub fn brute_count(body: &ConvexBody, c: &[f64], r: f64) -> u64 {
    scan(c, r)
        .iter()
        .filter(|m| gauge_of(body, m, c) <= r + MEMBER_TOL)
        .count() as u64
}

fn support_points(f: &LatticeFunction) -> Vec<(Vec<i64>, f64)> {
    f.iter().filter(|(_, v)| *v != 0.0).map(|(p, v)| (p, v.abs())).collect()
}

/// Largest gauge from `c` to a corner of the storage box of `f`.
fn reach(body: &ConvexBody, f: &LatticeFunction, c: &[f64]) -> f64 {
    let d = f.dim();
    let mut best = 0.0f64;
    for mask in 0..(1usize << d) {
        let m: Vec<i64> = (0..d)
            .map(|i| if mask >> i & 1 == 1 { f.box_hi()[i] } else { f.box_lo()[i] })
            .collect();
        best = best.max(gauge_of(body, &m, c));
    }
    best
}

/// Average of `|f|` over the ball `Ω̄_r(c)`, counting its lattice points by scanning.
pub fn brute_average(f: &LatticeFunction, body: &ConvexBody, c: &[f64], r: f64, beta: f64) -> f64 {
    let d = f.dim() as f64;
    let mut n = 0u64;
    let mut s = 0.0;
    for m in scan(c, r) {
        if gauge_of(body, &m, c) <= r + MEMBER_TOL {
            n += 1;
            s += f.get(&m).abs();
        }
    }
    if n == 0 {
        0.0
    } else {
        s / (n as f64).powf(1.0 - beta / d)
    }
}

/// Centered maximal function at `n`: every radius equal to a gauge value up to the
/// support reach plus one.
pub fn brute_centered_nd(f: &LatticeFunction, body: &ConvexBody, beta: f64, n: &[i64]) -> f64 {
    let c: Vec<f64> = n.iter().map(|&v| v as f64).collect();
    let rmax = reach(body, f, &c) + 1.0;
    let mut radii: Vec<f64> = scan(&c, rmax)
        .iter()
        .map(|m| gauge_of(body, m, &c))
        .filter(|&g| g <= rmax)
        .collect();
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    radii
        .iter()
        .map(|&r| brute_average(f, body, &c, r, beta))
        .fold(0.0, f64::max)
}

/// Uncentered maximal function at `n` over centers in `(1/K) Z^d` and radii realized as
/// gauge values, restricted to balls that contain `n`.
pub fn brute_uncentered_nd(
    f: &LatticeFunction,
    body: &ConvexBody,
    beta: f64,
    n: &[i64],
    k: u32,
) -> f64 {
    let d = f.dim();
    let dd = d as f64;
    let nf: Vec<f64> = n.iter().map(|&v| v as f64).collect();
    let rmax = reach(body, f, &nf) + dd + 1.0;
    let kk = k as f64;
    let lo: Vec<i64> = nf.iter().map(|&x| ((x - 2.0 * rmax) * kk).floor() as i64).collect();
    let hi: Vec<i64> = nf.iter().map(|&x| ((x + 2.0 * rmax) * kk).ceil() as i64).collect();
    let mut best = 0.0f64;
    let mut q = lo.clone();
    loop {
        let c: Vec<f64> = q.iter().map(|&v| v as f64 / kk).collect();
        let gn = gauge_of(body, n, &c);
        if gn <= rmax {
            // every lattice point near c, sorted by gauge
            let mut near: Vec<(f64, f64)> = scan(&c, 2.0 * rmax)
                .iter()
                .map(|m| (gauge_of(body, m, &c), f.get(m).abs()))
                .filter(|(g, _)| *g <= 2.0 * rmax)
                .collect();
            near.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut i = 0;
            let mut s = 0.0;
            while i < near.len() {
                let r = near[i].0;
                let mut j = i;
                while j < near.len() && near[j].0 <= r + MEMBER_TOL {
                    s += near[j].1;
                    j += 1;
                }
                if r + MEMBER_TOL >= gn && r <= 2.0 * rmax - 1.0 {
                    best = best.max(s / (j as f64).powf(1.0 - beta / dd));
                }
                i = j;
            }
        }
        let mut i = d;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if q[i] < hi[i] {
                q[i] += 1;
                break;
            }
            q[i] = lo[i];
        }
    }
}

/// `Σ_{m ≠ n} f(m) / |n - m|^{d-β}` with the Euclidean norm.
pub fn brute_integral(f: &LatticeFunction, beta: f64, n: &[i64]) -> f64 {
    let d = f.dim() as f64;
    f.iter()
        .filter(|(p, v)| *v != 0.0 && p.as_slice() != n)
        .map(|(p, v)| {
            let r2: f64 = p.iter().zip(n).map(|(a, b)| ((a - b) * (a - b)) as f64).sum();
            v / r2.sqrt().powf(d - beta)
        })
        .sum()
}
