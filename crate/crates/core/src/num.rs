//! Small numeric helpers: double-double accumulation and compensated sums.

use std::ops::{Add, Sub};

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub(crate) struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

impl Dd {
    pub(crate) const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    #[inline]
    pub(crate) fn add_f64(self, x: f64) -> Dd {
        let (s, e) = two_sum(self.hi, x);
        let (hi, lo) = quick_two_sum(s, e + self.lo);
        Dd { hi, lo }
    }

    #[inline]
    pub(crate) fn value(self) -> f64 {
        self.hi + self.lo
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, o: Dd) -> Dd {
        self + Dd {
            hi: -o.hi,
            lo: -o.lo,
        }
    }
}

/// Neumaier-compensated sum of an iterator.
pub(crate) fn compensated_sum<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut acc = Dd::ZERO;
    for x in it {
        acc = acc.add_f64(x);
    }
    acc.value()
}

/// `n^e` for `n >= 1`, evaluated as `exp(e * ln n)`.
#[inline]
pub(crate) fn pow_count(n: f64, e: f64) -> f64 {
    (e * n.ln()).exp()
}

/// Ordering key for maximal-function candidates.
///
/// Nonnegative values that agree to about 40 mantissa bits share a key, so candidates
/// differing only by rounding count as tied and the tie-breaking rules decide. The map is
/// monotone, which keeps every comparison transitive. Negative values (sentinels) map to 0.
#[inline]
pub(crate) fn value_key(v: f64) -> u64 {
    if v >= 0.0 {
        (v.to_bits() >> 12) + 1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dd_recovers_cancelled_terms() {
        let s = Dd::ZERO.add_f64(1e16).add_f64(1.0).add_f64(-1e16);
        assert_eq!(s.value(), 1.0);
        let a = Dd::ZERO.add_f64(0.1).add_f64(0.2);
        let b = Dd::ZERO.add_f64(0.1);
        assert_eq!((a - b).value(), 0.2);
    }

    #[test]
    fn compensated_sum_of_many_small_terms() {
        let s = compensated_sum(std::iter::repeat(0.1).take(10));
        assert_eq!(s, 1.0);
    }
}
