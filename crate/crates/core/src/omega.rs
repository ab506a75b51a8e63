//! Convex bodies `Ω ⊂ R^d`, their gauges, lattice points of dilated balls and the
//! counting constants `C_Ω, c1, c2, λ`.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, invalid_input, invalid_param, Error, Result};

/// Slack added to the radius in every membership test `gauge(m - x0) <= r`.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Largest bounding box scanned by [`count_lattice`] and [`enumerate_ball`].
pub const MAX_SCAN_CELLS: u128 = 1_000_000_000;

/// A halfspace `a · x <= b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Halfspace {
    pub a: Vec<f64>,
    pub b: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    /// The unit ball of the `ℓ^p` norm, `1 <= p <= ∞`.
    LpBall { p: f64 },
    /// `{x : a_i · x <= b_i for all i}` with every `b_i > 0`.
    Polytope { halfspaces: Vec<Halfspace> },
}

/// A bounded convex body containing the origin in its interior and `±e_i` in its closure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BodyRepr", into = "BodyRepr")]
pub struct ConvexBody {
    dim: usize,
    shape: Shape,
    // bounding box of the closed unit body
    ext_lo: Vec<f64>,
    ext_hi: Vec<f64>,
    vertices: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum BodyRepr {
    Lp { p: f64, dim: usize },
    Linf { dim: usize },
    Polytope { dim: usize, halfspaces: Vec<Halfspace> },
}

impl TryFrom<BodyRepr> for ConvexBody {
    type Error = Error;
    fn try_from(r: BodyRepr) -> Result<Self> {
        match r {
            BodyRepr::Lp { p, dim } => ConvexBody::lp(dim, p),
            BodyRepr::Linf { dim } => ConvexBody::linf(dim),
            BodyRepr::Polytope { dim, halfspaces } => ConvexBody::polytope(dim, halfspaces),
        }
    }
}

impl From<ConvexBody> for BodyRepr {
    fn from(b: ConvexBody) -> Self {
        match b.shape {
            Shape::LpBall { p } if p == f64::INFINITY => BodyRepr::Linf { dim: b.dim },
            Shape::LpBall { p } => BodyRepr::Lp { p, dim: b.dim },
            Shape::Polytope { halfspaces } => BodyRepr::Polytope {
                dim: b.dim,
                halfspaces,
            },
        }
    }
}

impl ConvexBody {
    /// Unit ball of `ℓ^p` in dimension `dim`.
    pub fn lp(dim: usize, p: f64) -> Result<Self> {
        if dim == 0 {
            return Err(invalid_input("body dimension must be positive"));
        }
        if p.is_nan() || p < 1.0 {
            return Err(invalid_param(format!("lp body needs p >= 1, got {p}")));
        }
        Ok(ConvexBody {
            dim,
            shape: Shape::LpBall { p },
            ext_lo: vec![-1.0; dim],
            ext_hi: vec![1.0; dim],
            vertices: Vec::new(),
        })
    }

    /// The cube `(-1, 1)^d`.
    pub fn linf(dim: usize) -> Result<Self> {
        Self::lp(dim, f64::INFINITY)
    }

    /// Euclidean unit ball.
    pub fn euclidean(dim: usize) -> Result<Self> {
        Self::lp(dim, 2.0)
    }

    /// Bounded polytope `{a_i · x <= b_i}`; every `b_i` must be positive.
    pub fn polytope(dim: usize, halfspaces: Vec<Halfspace>) -> Result<Self> {
        if dim == 0 {
            return Err(invalid_input("body dimension must be positive"));
        }
        if halfspaces.is_empty() {
            return Err(Error::NonConformingBody("polytope without halfspaces".into()));
        }
        for (i, h) in halfspaces.iter().enumerate() {
            check_dim(dim, h.a.len())?;
            if !h.b.is_finite() || h.b <= 0.0 {
                return Err(Error::NonConformingBody(format!(
                    "halfspace #{i} has b = {}, the origin must be interior",
                    h.b
                )));
            }
            if h.a.iter().any(|v| !v.is_finite()) {
                return Err(invalid_input(format!("halfspace #{i} has a non-finite normal")));
            }
        }
        let rows: Vec<Vec<f64>> = halfspaces.iter().map(|h| h.a.clone()).collect();
        if let Some(ray) = recession_ray(&rows, dim) {
            return Err(Error::NonConformingBody(format!(
                "polytope is unbounded along {ray:?}"
            )));
        }
        let hs: Vec<(Vec<f64>, f64)> = halfspaces.iter().map(|h| (h.a.clone(), h.b)).collect();
        let vertices = polytope_vertices(&hs, dim);
        let mut ext_lo = vec![f64::INFINITY; dim];
        let mut ext_hi = vec![f64::NEG_INFINITY; dim];
        for v in &vertices {
            for i in 0..dim {
                ext_lo[i] = ext_lo[i].min(v[i]);
                ext_hi[i] = ext_hi[i].max(v[i]);
            }
        }
        let body = ConvexBody {
            dim,
            shape: Shape::Polytope { halfspaces },
            ext_lo,
            ext_hi,
            vertices,
        };
        for i in 0..dim {
            for s in [-1.0, 1.0] {
                let mut e = vec![0.0; dim];
                e[i] = s;
                let g = body.gauge_unchecked(&e);
                if g > 1.0 + BOUNDARY_TOL {
                    return Err(Error::NonConformingBody(format!(
                        "gauge({}e_{i}) = {g} > 1; the body must contain ±e_i",
                        if s < 0.0 { "-" } else { "+" }
                    )));
                }
            }
        }
        Ok(body)
    }

    /// The cube `{|x_i| <= 1}` written as a polytope.
    pub fn cube_polytope(dim: usize) -> Result<Self> {
        let mut hs = Vec::new();
        for i in 0..dim {
            for s in [1.0, -1.0] {
                let mut a = vec![0.0; dim];
                a[i] = s;
                hs.push(Halfspace { a, b: 1.0 });
            }
        }
        Self::polytope(dim, hs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    /// True for the `ℓ^∞` ball, whose lattice balls are integer boxes.
    pub fn is_cube(&self) -> bool {
        matches!(self.shape, Shape::LpBall { p } if p == f64::INFINITY)
    }

    /// Lower corner of the bounding box of the closed unit body.
    pub fn extent_lo(&self) -> &[f64] {
        &self.ext_lo
    }

    /// Upper corner of the bounding box of the closed unit body.
    pub fn extent_hi(&self) -> &[f64] {
        &self.ext_hi
    }

    /// Vertices of a polytope body (empty for `ℓ^p` balls).
    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    /// Minkowski functional `inf{t > 0 : y ∈ tΩ}`.
    pub fn gauge(&self, y: &[f64]) -> Result<f64> {
        check_dim(self.dim, y.len())?;
        Ok(self.gauge_unchecked(y))
    }

    #[inline]
    pub(crate) fn gauge_unchecked(&self, y: &[f64]) -> f64 {
        match &self.shape {
            Shape::LpBall { p } => lp_norm_vec(y, *p),
            Shape::Polytope { halfspaces } => halfspaces
                .iter()
                .map(|h| dot(&h.a, y) / h.b)
                .fold(0.0, f64::max),
        }
    }

    /// Gauge of an integer offset `m - x0`.
    #[inline]
    pub(crate) fn gauge_offset(&self, m: &[i64], x0: &[f64], buf: &mut [f64]) -> f64 {
        for i in 0..self.dim {
            buf[i] = m[i] as f64 - x0[i];
        }
        self.gauge_unchecked(buf)
    }

    /// Integer box that contains every lattice point of `Ω̄_r(x0)`.
    pub(crate) fn scan_box(&self, x0: &[f64], r: f64) -> (Vec<i64>, Vec<i64>) {
        let slack = 1e-9 * (1.0 + r.abs());
        let lo = (0..self.dim)
            .map(|i| (x0[i] + r * self.ext_lo[i] - slack).ceil() as i64)
            .collect();
        let hi = (0..self.dim)
            .map(|i| (x0[i] + r * self.ext_hi[i] + slack).floor() as i64)
            .collect();
        (lo, hi)
    }

    /// Lebesgue measure `C_Ω` of the body.
    pub fn volume(&self) -> f64 {
        match &self.shape {
            Shape::LpBall { p } => lp_ball_volume(self.dim, *p),
            Shape::Polytope { halfspaces } => {
                let hs: Vec<(Vec<f64>, f64)> =
                    halfspaces.iter().map(|h| (h.a.clone(), h.b)).collect();
                polytope_volume(&hs, self.dim)
            }
        }
    }

    /// Largest Euclidean norm of a point with gauge 1.
    pub fn lambda(&self) -> f64 {
        match &self.shape {
            Shape::LpBall { p } => {
                if *p >= 2.0 {
                    (self.dim as f64).powf(0.5 - 1.0 / p)
                } else {
                    1.0
                }
            }
            Shape::Polytope { .. } => self
                .vertices
                .iter()
                .map(|v| dot(v, v).sqrt())
                .fold(0.0, f64::max),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("body serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
fn lp_norm_vec(y: &[f64], p: f64) -> f64 {
    if p == f64::INFINITY {
        y.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    } else if p == 1.0 {
        y.iter().map(|v| v.abs()).sum()
    } else if p == 2.0 {
        y.iter().map(|v| v * v).sum::<f64>().sqrt()
    } else {
        let m = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if m == 0.0 {
            return 0.0;
        }
        m * y.iter().map(|v| (v.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

fn lp_ball_volume(d: usize, p: f64) -> f64 {
    if p == f64::INFINITY {
        return 2f64.powi(d as i32);
    }
    let df = d as f64;
    (2.0 * libm::tgamma(1.0 + 1.0 / p)).powi(d as i32) / libm::tgamma(1.0 + df / p)
}

fn check_radius(r: f64) -> Result<()> {
    if !r.is_finite() || r < 0.0 {
        Err(invalid_param(format!("radius must be finite and >= 0, got {r}")))
    } else {
        Ok(())
    }
}

fn check_center(body: &ConvexBody, x0: &[f64]) -> Result<()> {
    check_dim(body.dim, x0.len())?;
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(invalid_input("center must be finite"));
    }
    Ok(())
}

fn checked_scan_box(body: &ConvexBody, x0: &[f64], r: f64) -> Result<(Vec<i64>, Vec<i64>)> {
    let (lo, hi) = body.scan_box(x0, r);
    let cells: u128 = lo
        .iter()
        .zip(&hi)
        .map(|(&a, &b)| if b < a { 0 } else { (b - a + 1) as u128 })
        .product();
    if cells > MAX_SCAN_CELLS {
        return Err(Error::TooLarge {
            what: "lattice ball scan",
            cells,
            limit: MAX_SCAN_CELLS,
        });
    }
    Ok((lo, hi))
}

/// Calls `visit(m, gauge(m - x0))` for every lattice point of `Ω̄_r(x0)`, in row-major order.
pub(crate) fn for_each_in_ball(
    body: &ConvexBody,
    x0: &[f64],
    r: f64,
    mut visit: impl FnMut(&[i64], f64),
) -> Result<()> {
    check_center(body, x0)?;
    check_radius(r)?;
    let (lo, hi) = checked_scan_box(body, x0, r)?;
    if lo.iter().zip(&hi).any(|(a, b)| a > b) {
        return Ok(());
    }
    let mut m = lo.clone();
    let mut buf = vec![0.0; body.dim];
    loop {
        let g = body.gauge_offset(&m, x0, &mut buf);
        if g <= r + BOUNDARY_TOL {
            visit(&m, g);
        }
        if !crate::lattice::advance(&mut m, &lo, &hi) {
            break;
        }
    }
    Ok(())
}

/// `N(x0, r)`: the number of lattice points `m` with `gauge(m - x0) <= r`.
pub fn count_lattice(body: &ConvexBody, x0: &[f64], r: f64) -> Result<u64> {
    let mut n = 0u64;
    for_each_in_ball(body, x0, r, |_, _| n += 1)?;
    Ok(n)
}

/// `N⁺(x0, r) = max(N(x0, r), 1)`; negative radii give 1.
pub fn count_lattice_plus(body: &ConvexBody, x0: &[f64], r: f64) -> Result<u64> {
    if r.is_nan() {
        return Err(invalid_param("radius is NaN"));
    }
    if r < 0.0 {
        check_center(body, x0)?;
        return Ok(1);
    }
    Ok(count_lattice(body, x0, r)?.max(1))
}

/// Lattice points of `Ω̄_r(x0)` sorted by gauge, with gauge ties (within
/// [`BOUNDARY_TOL`]) ordered lexicographically.
pub fn enumerate_ball(body: &ConvexBody, x0: &[f64], r: f64) -> Result<Vec<Vec<i64>>> {
    let ball = SortedBall::new(body, x0, r)?;
    Ok((0..ball.len()).map(|i| ball.point(i).to_vec()).collect())
}

/// A lattice ball enumeration sorted by gauge and split into tie groups.
///
/// Group `j` holds every point whose gauge lies within [`BOUNDARY_TOL`] of the group's
/// radius; the points of groups `0..=j` are exactly the lattice points of the ball of
/// that radius.
#[derive(Clone, Debug)]
pub struct SortedBall {
    dim: usize,
    coords: Vec<i64>,
    gauges: Vec<f64>,
    group_end: Vec<usize>,
    group_radius: Vec<f64>,
}

impl SortedBall {
    pub fn new(body: &ConvexBody, x0: &[f64], r: f64) -> Result<Self> {
        let d = body.dim;
        let mut pts: Vec<(f64, Vec<i64>)> = Vec::new();
        for_each_in_ball(body, x0, r, |m, g| pts.push((g, m.to_vec())))?;
        pts.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
        let mut group_end = Vec::new();
        let mut group_radius = Vec::new();
        let mut start = 0;
        while start < pts.len() {
            let g0 = pts[start].0;
            let mut end = start + 1;
            while end < pts.len() && pts[end].0 <= g0 + BOUNDARY_TOL {
                end += 1;
            }
            pts[start..end].sort_by(|a, b| a.1.cmp(&b.1));
            group_end.push(end);
            group_radius.push(g0);
            start = end;
        }
        let mut coords = Vec::with_capacity(pts.len() * d);
        let mut gauges = Vec::with_capacity(pts.len());
        for (g, m) in pts {
            coords.extend_from_slice(&m);
            gauges.push(g);
        }
        Ok(SortedBall {
            dim: d,
            coords,
            gauges,
            group_end,
            group_radius,
        })
    }

    pub fn len(&self) -> usize {
        self.gauges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gauges.is_empty()
    }

    pub fn point(&self, i: usize) -> &[i64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn gauge(&self, i: usize) -> f64 {
        self.gauges[i]
    }

    pub fn group_count(&self) -> usize {
        self.group_end.len()
    }

    /// One past the last point index of group `j`; also `N` at the group radius.
    pub fn group_end(&self, j: usize) -> usize {
        self.group_end[j]
    }

    pub fn group_radius(&self, j: usize) -> f64 {
        self.group_radius[j]
    }
}

/// Geometric constants of a body, fitted on radii up to `r_max_fitted`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OmegaConstants {
    /// Volume of the body.
    pub c_omega: f64,
    /// Sandwich constant: `C_Ω (r - c1)_+^d <= N(x, r) <= C_Ω (r + c1)^d` on the fit range.
    pub c1: f64,
    /// `c1 + C_Ω^{-1/d}`.
    pub c2: f64,
    /// Euclidean radius of the body.
    pub lambda: f64,
    pub r_max_fitted: f64,
}

const C1_GRID: f64 = 1e-3;

fn sandwich_holds(c: f64, d: usize, c1: f64, r: f64, n: u64) -> bool {
    let n = n as f64;
    let lower = c * (r - c1).max(0.0).powi(d as i32);
    let upper = c * (r + c1).powi(d as i32);
    lower <= n && n <= upper
}

/// Fits `c1` over radii `0.5, 1.0, ..., r_max` and centers `{0, 1/2}^d`, and derives
/// `C_Ω`, `c2` and `λ`.
pub fn estimate_constants(body: &ConvexBody, r_max: f64) -> Result<OmegaConstants> {
    if !(r_max >= 10.0) || !r_max.is_finite() {
        return Err(invalid_param(format!("r_max must be >= 10, got {r_max}")));
    }
    let d = body.dim;
    let c = body.volume();
    let steps = (2.0 * r_max + 1e-9).floor() as usize;
    let mut samples = Vec::new();
    for mask in 0..(1usize << d) {
        let x: Vec<f64> = (0..d)
            .map(|i| if mask >> i & 1 == 1 { 0.5 } else { 0.0 })
            .collect();
        for k in 1..=steps {
            let r = k as f64 * 0.5;
            samples.push((r, count_lattice(body, &x, r)?));
        }
    }
    let dinv = 1.0 / d as f64;
    let raw = samples
        .iter()
        .map(|&(r, n)| ((n as f64 / c).powf(dinv) - r).abs())
        .fold(0.0, f64::max);
    let mut k = ((raw / C1_GRID) - 1e-9).ceil().max(1.0) as u64;
    let limit = (r_max / 2.0 / C1_GRID).floor() as u64;
    loop {
        if k > limit {
            return Err(Error::NonConformingBody(format!(
                "no c1 <= {} satisfies the counting sandwich (needs about {raw})",
                r_max / 2.0
            )));
        }
        let c1 = k as f64 * C1_GRID;
        if samples.iter().all(|&(r, n)| sandwich_holds(c, d, c1, r, n)) {
            return Ok(OmegaConstants {
                c_omega: c,
                c1,
                c2: c1 + c.powf(-dinv),
                lambda: body.lambda(),
                r_max_fitted: r_max,
            });
        }
        k += 1;
    }
}

// ---- small dense linear algebra for polytopes ----

fn combinations(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        let mut i = k;
        let found = loop {
            if i == 0 {
                break None;
            }
            i -= 1;
            if idx[i] < n - k + i {
                break Some(i);
            }
        };
        let Some(i) = found else { return };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Row-reduces `m` in place and returns the pivot columns.
fn row_reduce(m: &mut [Vec<f64>], cols: usize) -> Vec<usize> {
    let scale = m
        .iter()
        .flat_map(|r| r[..cols].iter())
        .fold(0.0f64, |a, v| a.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    let eps = 1e-12 * scale;
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == m.len() {
            break;
        }
        let (best, val) = (row..m.len())
            .map(|r| (r, m[r][col].abs()))
            .fold((row, -1.0), |a, b| if b.1 > a.1 { b } else { a });
        if val <= eps {
            continue;
        }
        m.swap(row, best);
        let p = m[row][col];
        for v in m[row].iter_mut() {
            *v /= p;
        }
        for r in 0..m.len() {
            if r != row {
                let f = m[r][col];
                if f != 0.0 {
                    let src = m[row].clone();
                    for (v, s) in m[r].iter_mut().zip(&src) {
                        *v -= f * s;
                    }
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

fn solve(a: &[&[f64]], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.to_vec();
            r.push(bi);
            r
        })
        .collect();
    let piv = row_reduce(&mut m, n);
    if piv.len() < n {
        return None;
    }
    Some((0..n).map(|i| m[i][n]).collect())
}

fn null_vector(rows: &[&[f64]], d: usize) -> Option<Vec<f64>> {
    let mut m: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
    let piv = row_reduce(&mut m, d);
    if piv.len() + 1 != d {
        return None;
    }
    let free = (0..d).find(|c| !piv.contains(c))?;
    let mut u = vec![0.0; d];
    u[free] = 1.0;
    for (r, &pc) in piv.iter().enumerate() {
        u[pc] = -m[r][free];
    }
    Some(u)
}

/// A direction `u != 0` with `a_i · u <= 0` for every row, if one exists.
fn recession_ray(rows: &[Vec<f64>], d: usize) -> Option<Vec<f64>> {
    let mut m = rows.to_vec();
    let rank = row_reduce(&mut m, d).len();
    if rank < d {
        return Some(null_vector_of_all(rows, d));
    }
    let mut found = None;
    combinations(rows.len(), d - 1, |idx| {
        if found.is_some() {
            return;
        }
        let sub: Vec<&[f64]> = idx.iter().map(|&i| rows[i].as_slice()).collect();
        if let Some(u) = null_vector(&sub, d) {
            for s in [1.0, -1.0] {
                let v: Vec<f64> = u.iter().map(|x| s * x).collect();
                let unorm = dot(&v, &v).sqrt();
                if rows
                    .iter()
                    .all(|a| dot(a, &v) <= 1e-12 * unorm * dot(a, a).sqrt())
                {
                    found = Some(v);
                    return;
                }
            }
        }
    });
    found
}

fn null_vector_of_all(rows: &[Vec<f64>], d: usize) -> Vec<f64> {
    let mut m = rows.to_vec();
    let piv = row_reduce(&mut m, d);
    let free = (0..d).find(|c| !piv.contains(c)).unwrap_or(0);
    let mut u = vec![0.0; d];
    u[free] = 1.0;
    for (r, &pc) in piv.iter().enumerate() {
        u[pc] = -m[r][free];
    }
    u
}

fn polytope_vertices(hs: &[(Vec<f64>, f64)], d: usize) -> Vec<Vec<f64>> {
    let mut verts: Vec<Vec<f64>> = Vec::new();
    combinations(hs.len(), d, |idx| {
        let a: Vec<&[f64]> = idx.iter().map(|&i| hs[i].0.as_slice()).collect();
        let b: Vec<f64> = idx.iter().map(|&i| hs[i].1).collect();
        if let Some(x) = solve(&a, &b) {
            let feasible = hs
                .iter()
                .all(|(a, b)| dot(a, &x) <= b + 1e-9 * (1.0 + b.abs()));
            let fresh = verts
                .iter()
                .all(|v| v.iter().zip(&x).any(|(p, q)| (p - q).abs() > 1e-9));
            if feasible && fresh {
                verts.push(x);
            }
        }
    });
    verts
}

const GAUSS5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664, 0.236_926_885_056_189_08),
    (0.906_179_845_938_664, 0.236_926_885_056_189_08),
];

/// Volume of `{a_i · x <= b_i}` by slicing along the first coordinate.
///
/// The slice volume is a polynomial of degree `d - 1` between consecutive vertex
/// abscissae, so five-point Gauss–Legendre on each such interval is exact up to rounding.
fn polytope_volume(hs: &[(Vec<f64>, f64)], d: usize) -> f64 {
    if d == 1 {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for (a, b) in hs {
            let a0 = a[0];
            if a0 > 1e-15 {
                hi = hi.min(b / a0);
            } else if a0 < -1e-15 {
                lo = lo.max(b / a0);
            } else if *b < 0.0 {
                return 0.0;
            }
        }
        return (hi - lo).max(0.0);
    }
    let verts = polytope_vertices(hs, d);
    if verts.len() <= d {
        return 0.0;
    }
    let mut xs: Vec<f64> = verts.iter().map(|v| v[0]).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
    let mut total = 0.0;
    for w in xs.windows(2) {
        let (a, b) = (w[0], w[1]);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for &(t, wt) in &GAUSS5 {
            let x = mid + half * t;
            let slice: Vec<(Vec<f64>, f64)> = hs
                .iter()
                .map(|(av, bv)| (av[1..].to_vec(), bv - av[0] * x))
                .collect();
            total += wt * half * polytope_volume(&slice, d - 1);
        }
    }
    total
}
