//! Seeded random inputs: i.i.d. uniform values on a random sub-support for three quarters of
//! the draws, structured families (indicators, two bumps, staircases) for the rest.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::continuous::StepFunction1D;
use crate::lattice::LatticeFunction;

/// SplitMix64 finalizer, used to derive independent per-trial seeds.
pub fn mix_seed(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of trial `index` in a run started from `seed`.
pub fn trial_seed(seed: u64, index: u64) -> u64 {
    mix_seed(mix_seed(seed) ^ index)
}

pub fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn structured(rng: &mut ChaCha8Rng, len: usize) -> (Vec<f64>, &'static str) {
    match rng.gen_range(0..3) {
        0 => {
            let c = rng.gen_range(0.1..=1.0);
            (vec![c; len], "indicator")
        }
        1 if len >= 3 => {
            let mut v = vec![0.0; len];
            let n = len;
            let w1 = rng.gen_range(1..=(n / 3).max(1));
            let w2 = rng.gen_range(1..=(n / 3).max(1));
            let (h1, h2) = (rng.gen_range(0.1..=1.0), rng.gen_range(0.1..=1.0));
            for x in v.iter_mut().take(w1) {
                *x = h1;
            }
            for x in v.iter_mut().skip(n - w2) {
                *x = h2;
            }
            (v, "two-bump")
        }
        _ => {
            let steps = rng.gen_range(2..=4usize);
            let mut levels: Vec<f64> = (0..steps).map(|_| rng.gen_range(0.1..=1.0)).collect();
            if rng.gen_bool(0.5) {
                levels.sort_by(f64::total_cmp);
            }
            let v = (0..len).map(|i| levels[i * steps / len]).collect();
            (v, "staircase")
        }
    }
}

/// Nonnegative function on `Z` with support length in `1..=max_len`.
pub fn lattice_1d(rng: &mut ChaCha8Rng, max_len: usize) -> (LatticeFunction, String) {
    let len = rng.gen_range(1..=max_len.max(1));
    let start = rng.gen_range(-8..=8);
    let (mut vals, kind) = if rng.gen_bool(0.75) {
        ((0..len).map(|_| rng.gen::<f64>()).collect::<Vec<_>>(), "iid")
    } else {
        structured(rng, len)
    };
    if vals.iter().all(|&v| v == 0.0) {
        vals[0] = 1.0;
    }
    let f = LatticeFunction::from_slice_1d(start, &vals)
        .expect("finite values")
        .trimmed();
    (f, format!("{kind} len={}", vals.len()))
}

/// Nonnegative function on `Z^d` on a random box of side `1..=max_side`.
pub fn lattice_nd(rng: &mut ChaCha8Rng, d: usize, max_side: i64) -> (LatticeFunction, String) {
    let sides: Vec<i64> = (0..d).map(|_| rng.gen_range(1..=max_side.max(1))).collect();
    let lo: Vec<i64> = (0..d).map(|_| rng.gen_range(-3..=3)).collect();
    let hi: Vec<i64> = lo.iter().zip(&sides).map(|(l, s)| l + s - 1).collect();
    let cells: usize = sides.iter().map(|&s| s as usize).product();
    let (vals, kind): (Vec<f64>, &str) = if rng.gen_bool(0.75) {
        let mut v: Vec<f64> = (0..cells).map(|_| rng.gen::<f64>()).collect();
        if v.iter().all(|&x| x == 0.0) {
            v[0] = 1.0;
        }
        (v, "iid")
    } else {
        match rng.gen_range(0..3) {
            0 => (vec![rng.gen_range(0.1..=1.0); cells], "indicator"),
            1 => {
                // two point masses at opposite corners of the box
                let mut v = vec![0.0; cells];
                v[0] = rng.gen_range(0.1..=1.0);
                v[cells - 1] = rng.gen_range(0.1..=1.0);
                (v, "two-bump")
            }
            _ => {
                let levels: Vec<f64> = (0..3).map(|_| rng.gen_range(0.1..=1.0)).collect();
                let first = sides[0] as usize;
                let rest = cells / first;
                let v = (0..cells).map(|i| levels[(i / rest) * 3 / first]).collect();
                (v, "staircase")
            }
        }
    };
    let f = LatticeFunction::new(lo, hi, vals).expect("consistent box").trimmed();
    (f, format!("{kind} sides={sides:?}"))
}

/// Nonnegative step function with `1..=max_pieces` pieces on `[0, pieces]`, breakpoints
/// jittered around the integers.
pub fn step_1d(rng: &mut ChaCha8Rng, max_pieces: usize) -> (StepFunction1D, String) {
    let m = rng.gen_range(1..=max_pieces.max(1));
    let mut bps: Vec<f64> = (0..=m).map(|i| i as f64).collect();
    for b in bps.iter_mut().take(m).skip(1) {
        *b += rng.gen_range(-0.4..0.4);
    }
    let (mut vals, kind) = if rng.gen_bool(0.75) {
        ((0..m).map(|_| rng.gen::<f64>()).collect::<Vec<_>>(), "iid")
    } else {
        structured(rng, m)
    };
    if vals.iter().all(|&v| v == 0.0) {
        vals[0] = 1.0;
    }
    let n = vals.len();
    let f = StepFunction1D::new(bps, vals).expect("increasing breakpoints");
    (f, format!("{kind} pieces={n}"))
}
