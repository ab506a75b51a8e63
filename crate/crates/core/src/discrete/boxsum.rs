//! Summed-area tables of `|f|` in double-double precision.

use crate::lattice::LatticeFunction;
use crate::num::Dd;

pub(crate) struct BoxSums {
    lo: Vec<i64>,
    hi: Vec<i64>,
    strides: Vec<usize>,
    table: Vec<Dd>,
}

impl BoxSums {
    /// Table over the storage box of `f`; `table[i]` holds the sum of `|f|` over the
    /// points strictly below the multi-index `i` in every coordinate.
    pub(crate) fn new(f: &LatticeFunction) -> Self {
        let d = f.dim();
        let lo = f.box_lo().to_vec();
        let hi = f.box_hi().to_vec();
        let ext: Vec<usize> = (0..d).map(|i| (hi[i] - lo[i] + 2) as usize).collect();
        let mut strides = vec![1usize; d];
        for i in (0..d.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * ext[i + 1];
        }
        let total: usize = ext.iter().product();
        let mut table = vec![Dd::ZERO; total];
        let fstr = f.strides();
        let vals = f.values();
        for (k, &v) in vals.iter().enumerate() {
            let mut rem = k;
            let mut idx = 0;
            for i in 0..d {
                let c = rem / fstr[i];
                rem %= fstr[i];
                idx += (c + 1) * strides[i];
            }
            table[idx] = Dd::ZERO.add_f64(v.abs());
        }
        for axis in 0..d {
            let st = strides[axis];
            for idx in 0..total {
                let c = (idx / st) % ext[axis];
                if c >= 1 {
                    let prev = table[idx - st];
                    table[idx] = table[idx] + prev;
                }
            }
        }
        BoxSums {
            lo,
            hi,
            strides,
            table,
        }
    }

    /// Sum of `|f|` over the integer box `[a, b]` (clipped to the storage box).
    pub(crate) fn sum(&self, a: &[i64], b: &[i64]) -> f64 {
        let d = self.lo.len();
        let mut lo_ix = [0usize; 8];
        let mut hi_ix = [0usize; 8];
        debug_assert!(d <= 8);
        for i in 0..d {
            let x = a[i].max(self.lo[i]);
            let y = b[i].min(self.hi[i]);
            if x > y {
                return 0.0;
            }
            lo_ix[i] = (x - self.lo[i]) as usize;
            hi_ix[i] = (y - self.lo[i]) as usize + 1;
        }
        let mut acc = Dd::ZERO;
        for mask in 0..(1usize << d) {
            let mut idx = 0;
            let mut neg = false;
            for i in 0..d {
                if mask >> i & 1 == 1 {
                    idx += lo_ix[i] * self.strides[i];
                    neg = !neg;
                } else {
                    idx += hi_ix[i] * self.strides[i];
                }
            }
            if neg {
                acc = acc - self.table[idx];
            } else {
                acc = acc + self.table[idx];
            }
        }
        acc.value().max(0.0)
    }
}

/// Prefix sums of `|f|` for a one-dimensional function.
pub(crate) struct Prefix1d {
    lo: i64,
    hi: i64,
    table: Vec<Dd>,
}

impl Prefix1d {
    pub(crate) fn new(start: i64, values: &[f64]) -> Self {
        let mut table = Vec::with_capacity(values.len() + 1);
        let mut acc = Dd::ZERO;
        table.push(acc);
        for v in values {
            acc = acc.add_f64(v.abs());
            table.push(acc);
        }
        Prefix1d {
            lo: start,
            hi: start + values.len() as i64 - 1,
            table,
        }
    }

    /// Sum of `|f|` over `[u, v]`, clipped to the stored range.
    #[inline]
    pub(crate) fn sum(&self, u: i64, v: i64) -> f64 {
        let x = u.max(self.lo);
        let y = v.min(self.hi);
        if x > y {
            return 0.0;
        }
        (self.table[(y - self.lo) as usize + 1] - self.table[(x - self.lo) as usize])
            .value()
            .max(0.0)
    }
}
