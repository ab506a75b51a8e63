//! Finitely supported functions on `Z^d`, evaluation windows, forward gradients and norms.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, invalid_input, invalid_param, Error, Result};
use crate::num::compensated_sum;

/// Largest dense box accepted by [`LatticeFunction`].
pub const MAX_CELLS: u128 = 100_000_000;

fn cell_count(lo: &[i64], hi: &[i64]) -> u128 {
    lo.iter()
        .zip(hi)
        .map(|(&a, &b)| (b as i128 - a as i128 + 1) as u128)
        .product()
}

fn check_box(lo: &[i64], hi: &[i64], what: &'static str) -> Result<usize> {
    if lo.is_empty() {
        return Err(invalid_input(format!("{what}: dimension must be positive")));
    }
    check_dim(lo.len(), hi.len())?;
    if let Some(i) = (0..lo.len()).find(|&i| lo[i] > hi[i]) {
        return Err(invalid_input(format!(
            "{what}: lo[{i}] = {} exceeds hi[{i}] = {}",
            lo[i], hi[i]
        )));
    }
    let cells = cell_count(lo, hi);
    if cells > MAX_CELLS {
        return Err(Error::TooLarge {
            what,
            cells,
            limit: MAX_CELLS,
        });
    }
    Ok(cells as usize)
}

fn strides_for(lo: &[i64], hi: &[i64]) -> Vec<usize> {
    let d = lo.len();
    let mut strides = vec![1usize; d];
    for i in (0..d.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * (hi[i + 1] - lo[i + 1] + 1) as usize;
    }
    strides
}

/// Iterates the lattice points of an integer box in row-major order (last coordinate fastest).
#[derive(Clone, Debug)]
pub struct BoxPoints {
    lo: Vec<i64>,
    hi: Vec<i64>,
    next: Option<Vec<i64>>,
}

impl BoxPoints {
    pub fn new(lo: &[i64], hi: &[i64]) -> Self {
        let empty = lo.iter().zip(hi).any(|(a, b)| a > b);
        BoxPoints {
            lo: lo.to_vec(),
            hi: hi.to_vec(),
            next: if empty { None } else { Some(lo.to_vec()) },
        }
    }
}

/// Advances `p` to the next point of the box in row-major order; returns false after the last.
pub(crate) fn advance(p: &mut [i64], lo: &[i64], hi: &[i64]) -> bool {
    for i in (0..p.len()).rev() {
        if p[i] < hi[i] {
            p[i] += 1;
            return true;
        }
        p[i] = lo[i];
    }
    false
}

impl Iterator for BoxPoints {
    type Item = Vec<i64>;
    fn next(&mut self) -> Option<Vec<i64>> {
        let cur = self.next.take()?;
        let mut nxt = cur.clone();
        if advance(&mut nxt, &self.lo, &self.hi) {
            self.next = Some(nxt);
        }
        Some(cur)
    }
}

/// Inclusive integer box on which an operator output is materialized.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvaluationWindow {
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl EvaluationWindow {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self> {
        check_box(&lo, &hi, "evaluation window")?;
        Ok(EvaluationWindow { lo, hi })
    }

    /// One-dimensional window `[lo, hi]`.
    pub fn interval(lo: i64, hi: i64) -> Result<Self> {
        Self::new(vec![lo], vec![hi])
    }

    /// The cube `[-k, k]^d`.
    pub fn cube(dim: usize, k: i64) -> Result<Self> {
        Self::new(vec![-k; dim], vec![k; dim])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[i64] {
        &self.lo
    }

    pub fn hi(&self) -> &[i64] {
        &self.hi
    }

    pub fn len(&self) -> usize {
        cell_count(&self.lo, &self.hi) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, n: &[i64]) -> bool {
        n.len() == self.dim() && (0..n.len()).all(|i| self.lo[i] <= n[i] && n[i] <= self.hi[i])
    }

    /// Window grown by `margin` on every side.
    pub fn expand(&self, margin: i64) -> Result<Self> {
        Self::new(
            self.lo.iter().map(|&a| a - margin).collect(),
            self.hi.iter().map(|&b| b + margin).collect(),
        )
    }

    /// Window grown by `margin` on the high side of every coordinate, so forward differences
    /// of an output materialized on it cover the original window.
    pub fn expand_high(&self, margin: i64) -> Result<Self> {
        Self::new(
            self.lo.clone(),
            self.hi.iter().map(|&b| b + margin).collect(),
        )
    }

    pub fn points(&self) -> BoxPoints {
        BoxPoints::new(&self.lo, &self.hi)
    }
}

impl FromStr for EvaluationWindow {
    type Err = Error;

    /// Parses `lo:hi[,lo:hi...]`, one inclusive range per dimension.
    fn from_str(s: &str) -> Result<Self> {
        let mut lo = Vec::new();
        let mut hi = Vec::new();
        for part in s.split(',') {
            let part = part.trim();
            // the separator is the first ':' that is not a leading sign position
            let idx = part
                .char_indices()
                .skip(1)
                .find(|&(_, c)| c == ':')
                .map(|(i, _)| i)
                .ok_or_else(|| invalid_input(format!("window range `{part}` must be lo:hi")))?;
            let a = part[..idx]
                .trim()
                .parse::<i64>()
                .map_err(|e| invalid_input(format!("window bound `{}`: {e}", &part[..idx])))?;
            let b = part[idx + 1..]
                .trim()
                .parse::<i64>()
                .map_err(|e| invalid_input(format!("window bound `{}`: {e}", &part[idx + 1..])))?;
            lo.push(a);
            hi.push(b);
        }
        Self::new(lo, hi)
    }
}

impl fmt::Display for EvaluationWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}:{}", self.lo[i], self.hi[i])?;
        }
        Ok(())
    }
}

/// A real function on `Z^d` that vanishes outside an integer box.
///
/// Values are stored densely over `[box_lo, box_hi]` in row-major order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FunctionRepr", into = "FunctionRepr")]
pub struct LatticeFunction {
    lo: Vec<i64>,
    hi: Vec<i64>,
    strides: Vec<usize>,
    values: Vec<f64>,
}

impl LatticeFunction {
    pub fn new(box_lo: Vec<i64>, box_hi: Vec<i64>, values: Vec<f64>) -> Result<Self> {
        let cells = check_box(&box_lo, &box_hi, "lattice function box")?;
        if values.len() != cells {
            return Err(invalid_input(format!(
                "box holds {cells} cells but {} values were given",
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(invalid_input(format!("value #{i} is not finite")));
        }
        let strides = strides_for(&box_lo, &box_hi);
        Ok(LatticeFunction {
            lo: box_lo,
            hi: box_hi,
            strides,
            values,
        })
    }

    /// The zero function stored on the given box.
    pub fn zeros(box_lo: Vec<i64>, box_hi: Vec<i64>) -> Result<Self> {
        let cells = check_box(&box_lo, &box_hi, "lattice function box")?;
        Self::new(box_lo, box_hi, vec![0.0; cells])
    }

    /// Samples `g` at every point of `window`.
    pub fn from_fn(window: &EvaluationWindow, mut g: impl FnMut(&[i64]) -> f64) -> Result<Self> {
        let values = window.points().map(|p| g(&p)).collect();
        Self::new(window.lo.clone(), window.hi.clone(), values)
    }

    /// One-dimensional function with `values[i]` at `start + i`.
    pub fn from_slice_1d(start: i64, values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid_input("empty value list"));
        }
        Self::new(
            vec![start],
            vec![start + values.len() as i64 - 1],
            values.to_vec(),
        )
    }

    /// Densifies a list of `(point, value)` pairs; duplicate points are rejected.
    pub fn from_points(dim: usize, points: &[(Vec<i64>, f64)]) -> Result<Self> {
        if dim == 0 {
            return Err(invalid_input("dimension must be positive"));
        }
        if points.is_empty() {
            return Self::zeros(vec![0; dim], vec![0; dim]);
        }
        let mut lo = vec![i64::MAX; dim];
        let mut hi = vec![i64::MIN; dim];
        for (n, _) in points {
            check_dim(dim, n.len())?;
            for i in 0..dim {
                lo[i] = lo[i].min(n[i]);
                hi[i] = hi[i].max(n[i]);
            }
        }
        let mut f = Self::zeros(lo, hi)?;
        let mut seen = vec![false; f.values.len()];
        for (n, v) in points {
            let idx = f.index_of(n).expect("point lies in its bounding box");
            if seen[idx] {
                return Err(invalid_input(format!("duplicate point {n:?}")));
            }
            if !v.is_finite() {
                return Err(invalid_input(format!("value at {n:?} is not finite")));
            }
            seen[idx] = true;
            f.values[idx] = *v;
        }
        Ok(f)
    }

    /// `v` at `n`, zero elsewhere.
    pub fn point_mass(n: &[i64], v: f64) -> Result<Self> {
        Self::new(n.to_vec(), n.to_vec(), vec![v])
    }

    /// Indicator of the integer box `[lo, hi]`.
    pub fn indicator(lo: &[i64], hi: &[i64]) -> Result<Self> {
        let cells = check_box(lo, hi, "indicator box")?;
        Self::new(lo.to_vec(), hi.to_vec(), vec![1.0; cells])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn box_lo(&self) -> &[i64] {
        &self.lo
    }

    pub fn box_hi(&self) -> &[i64] {
        &self.hi
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The storage box as a window.
    pub fn window(&self) -> EvaluationWindow {
        EvaluationWindow {
            lo: self.lo.clone(),
            hi: self.hi.clone(),
        }
    }

    pub(crate) fn strides(&self) -> &[usize] {
        &self.strides
    }

    /// Flat storage index of `n`, if `n` lies in the box.
    #[inline]
    pub fn index_of(&self, n: &[i64]) -> Option<usize> {
        if n.len() != self.lo.len() {
            return None;
        }
        let mut idx = 0usize;
        for i in 0..n.len() {
            if n[i] < self.lo[i] || n[i] > self.hi[i] {
                return None;
            }
            idx += (n[i] - self.lo[i]) as usize * self.strides[i];
        }
        Some(idx)
    }

    /// Lattice point stored at flat index `idx`.
    pub fn point_at(&self, mut idx: usize) -> Vec<i64> {
        let mut p = vec![0; self.dim()];
        for i in 0..self.dim() {
            p[i] = self.lo[i] + (idx / self.strides[i]) as i64;
            idx %= self.strides[i];
        }
        p
    }

    /// `f(n)`, zero outside the box.
    #[inline]
    pub fn get(&self, n: &[i64]) -> f64 {
        self.index_of(n).map_or(0.0, |i| self.values[i])
    }

    /// Iterates `(point, value)` over the whole box in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<i64>, f64)> + '_ {
        BoxPoints::new(&self.lo, &self.hi).zip(self.values.iter().copied())
    }

    /// Tight bounding box of the nonzero values, `None` for the zero function.
    pub fn support_hull(&self) -> Option<(Vec<i64>, Vec<i64>)> {
        let d = self.dim();
        let mut lo = vec![i64::MAX; d];
        let mut hi = vec![i64::MIN; d];
        let mut any = false;
        let mut p = self.lo.clone();
        for &v in &self.values {
            if v != 0.0 {
                any = true;
                for i in 0..d {
                    lo[i] = lo[i].min(p[i]);
                    hi[i] = hi[i].max(p[i]);
                }
            }
            advance(&mut p, &self.lo, &self.hi);
        }
        any.then_some((lo, hi))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// Same function stored on its tight support box (a single zero cell if `f = 0`).
    pub fn trimmed(&self) -> LatticeFunction {
        match self.support_hull() {
            Some((lo, hi)) => self.restrict(&EvaluationWindow { lo, hi }),
            None => LatticeFunction::zeros(self.lo.clone(), self.lo.clone())
                .expect("single cell box"),
        }
    }

    /// Values of `f` on `window`, stored on that window (zero where `f` vanishes).
    pub fn restrict(&self, window: &EvaluationWindow) -> LatticeFunction {
        let values = window.points().map(|p| self.get(&p)).collect();
        LatticeFunction {
            lo: window.lo.clone(),
            hi: window.hi.clone(),
            strides: strides_for(&window.lo, &window.hi),
            values,
        }
    }

    pub fn map(&self, g: impl Fn(f64) -> f64) -> Result<LatticeFunction> {
        Self::new(
            self.lo.clone(),
            self.hi.clone(),
            self.values.iter().map(|&v| g(v)).collect(),
        )
    }

    pub fn abs(&self) -> LatticeFunction {
        let mut f = self.clone();
        f.values.iter_mut().for_each(|v| *v = v.abs());
        f
    }

    pub fn scale(&self, c: f64) -> Result<LatticeFunction> {
        self.map(|v| c * v)
    }

    /// `n -> f(n - k)`.
    pub fn translate(&self, k: &[i64]) -> Result<LatticeFunction> {
        check_dim(self.dim(), k.len())?;
        Ok(LatticeFunction {
            lo: self.lo.iter().zip(k).map(|(a, b)| a + b).collect(),
            hi: self.hi.iter().zip(k).map(|(a, b)| a + b).collect(),
            strides: self.strides.clone(),
            values: self.values.clone(),
        })
    }

    /// Pointwise sum, stored on the union bounding box.
    pub fn add(&self, other: &LatticeFunction) -> Result<LatticeFunction> {
        check_dim(self.dim(), other.dim())?;
        let lo: Vec<i64> = (0..self.dim()).map(|i| self.lo[i].min(other.lo[i])).collect();
        let hi: Vec<i64> = (0..self.dim()).map(|i| self.hi[i].max(other.hi[i])).collect();
        let w = EvaluationWindow::new(lo, hi)?;
        Self::from_fn(&w, |p| self.get(p) + other.get(p))
    }

    /// `ℓ^p` norm over the support; `p = f64::INFINITY` gives the maximum modulus.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        lp_of(self.values.iter().map(|v| v.abs()), p)
    }

    /// Forward-difference gradient, see [`gradient`].
    pub fn gradient(&self) -> GradientField {
        gradient(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("finite values serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

#[derive(Serialize, Deserialize)]
struct SparsePoint {
    n: Vec<i64>,
    v: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum FunctionRepr {
    Dense {
        dim: usize,
        box_lo: Vec<i64>,
        box_hi: Vec<i64>,
        values: Vec<f64>,
    },
    Sparse {
        dim: usize,
        points: Vec<SparsePoint>,
    },
}

impl TryFrom<FunctionRepr> for LatticeFunction {
    type Error = Error;

    fn try_from(r: FunctionRepr) -> Result<Self> {
        match r {
            FunctionRepr::Dense {
                dim,
                box_lo,
                box_hi,
                values,
            } => {
                check_dim(dim, box_lo.len())?;
                LatticeFunction::new(box_lo, box_hi, values)
            }
            FunctionRepr::Sparse { dim, points } => {
                let pts: Vec<(Vec<i64>, f64)> = points.into_iter().map(|p| (p.n, p.v)).collect();
                LatticeFunction::from_points(dim, &pts)
            }
        }
    }
}

impl From<LatticeFunction> for FunctionRepr {
    fn from(f: LatticeFunction) -> Self {
        FunctionRepr::Dense {
            dim: f.lo.len(),
            box_lo: f.lo,
            box_hi: f.hi,
            values: f.values,
        }
    }
}

pub(crate) fn check_p(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        Err(invalid_param(format!("norm exponent p = {p} must be >= 1")))
    } else {
        Ok(())
    }
}

/// `ℓ^p` combination of nonnegative magnitudes.
pub(crate) fn lp_of(mags: impl Iterator<Item = f64>, p: f64) -> Result<f64> {
    check_p(p)?;
    if p == f64::INFINITY {
        return Ok(mags.fold(0.0, f64::max));
    }
    if p == 1.0 {
        return Ok(compensated_sum(mags));
    }
    let s = compensated_sum(mags.map(|m| m.powf(p)));
    Ok(s.powf(1.0 / p))
}

/// Forward differences `∂_i f(n) = f(n + e_i) - f(n)` of a lattice function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradientField {
    components: Vec<LatticeFunction>,
}

/// Forward-difference gradient of `f` (zero extension outside its box).
///
/// Component `i` is stored on the box of `f` extended by one on the low side of coordinate `i`.
pub fn gradient(f: &LatticeFunction) -> GradientField {
    let d = f.dim();
    let components = (0..d)
        .map(|i| {
            let mut lo = f.lo.clone();
            lo[i] -= 1;
            let w = EvaluationWindow {
                lo,
                hi: f.hi.clone(),
            };
            let mut e = vec![0i64; d];
            e[i] = 1;
            let values = w
                .points()
                .map(|p| {
                    let q: Vec<i64> = p.iter().zip(&e).map(|(a, b)| a + b).collect();
                    f.get(&q) - f.get(&p)
                })
                .collect();
            LatticeFunction {
                strides: strides_for(&w.lo, &w.hi),
                lo: w.lo,
                hi: w.hi,
                values,
            }
        })
        .collect();
    GradientField { components }
}

/// Forward differences of a function known only on its storage box.
///
/// Used for operator outputs materialized on a window, where values outside the window
/// are not zero. Every component lives on `[lo, hi - 1]` (all coordinates reduced), so
/// the full gradient vector is available at each stored point.
pub fn gradient_interior(g: &LatticeFunction) -> Result<GradientField> {
    let d = g.dim();
    if (0..d).any(|i| g.hi[i] <= g.lo[i]) {
        return Err(invalid_input(
            "interior gradient needs at least two points along every coordinate",
        ));
    }
    let w = EvaluationWindow {
        lo: g.lo.clone(),
        hi: g.hi.iter().map(|b| b - 1).collect(),
    };
    let components = (0..d)
        .map(|i| {
            let values = w
                .points()
                .map(|p| {
                    let base = g.index_of(&p).expect("inside box");
                    g.values[base + g.strides[i]] - g.values[base]
                })
                .collect();
            LatticeFunction {
                lo: w.lo.clone(),
                hi: w.hi.clone(),
                strides: strides_for(&w.lo, &w.hi),
                values,
            }
        })
        .collect();
    Ok(GradientField { components })
}

impl GradientField {
    pub fn from_components(components: Vec<LatticeFunction>) -> Result<Self> {
        if components.is_empty() {
            return Err(invalid_input("gradient needs at least one component"));
        }
        let d = components.len();
        for c in &components {
            check_dim(d, c.dim())?;
        }
        Ok(GradientField { components })
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, i: usize) -> &LatticeFunction {
        &self.components[i]
    }

    pub fn components(&self) -> &[LatticeFunction] {
        &self.components
    }

    /// Gradient vector at `n`.
    pub fn at(&self, n: &[i64]) -> Vec<f64> {
        self.components.iter().map(|c| c.get(n)).collect()
    }

    /// Euclidean length of the gradient vector at `n`.
    pub fn magnitude_at(&self, n: &[i64]) -> f64 {
        self.at(n).iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Union of the component boxes.
    pub fn window(&self) -> EvaluationWindow {
        let d = self.dim();
        let lo = (0..d)
            .map(|i| self.components.iter().map(|c| c.lo[i]).min().unwrap())
            .collect();
        let hi = (0..d)
            .map(|i| self.components.iter().map(|c| c.hi[i]).max().unwrap())
            .collect();
        EvaluationWindow { lo, hi }
    }

    /// Pointwise Euclidean magnitudes over [`GradientField::window`], in storage order.
    pub fn magnitudes(&self) -> Vec<f64> {
        let w = self.window();
        let same_box = self
            .components
            .iter()
            .all(|c| c.lo == w.lo && c.hi == w.hi);
        if same_box {
            let n = self.components[0].values.len();
            (0..n)
                .map(|k| {
                    self.components
                        .iter()
                        .map(|c| c.values[k] * c.values[k])
                        .sum::<f64>()
                        .sqrt()
                })
                .collect()
        } else {
            w.points().map(|p| self.magnitude_at(&p)).collect()
        }
    }

    /// `ℓ^p` norm of the Euclidean magnitude `|∇f(n)|`.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        check_p(p)?;
        lp_of(self.magnitudes().into_iter(), p)
    }

    /// `Σ_i ‖∂_i f‖_{ℓ^1}`: the number of unit boundary faces for an indicator.
    pub fn component_l1_sum(&self) -> f64 {
        compensated_sum(
            self.components
                .iter()
                .flat_map(|c| c.values.iter().map(|v| v.abs())),
        )
    }
}
