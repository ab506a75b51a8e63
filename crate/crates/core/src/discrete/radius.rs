//! Radius sets: every centered radius attaining the supremum at a point.

use serde::{Deserialize, Serialize};

use super::{check_beta, cover_radius};
use crate::error::{check_dim, Result};
use crate::lattice::LatticeFunction;
use crate::num::pow_count;
use crate::omega::{ConvexBody, SortedBall};

/// Relative tolerance under which two averages count as tied.
pub const RADIUS_TIE_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusSet {
    pub point: Vec<i64>,
    /// Attaining radii in increasing order.
    pub radii: Vec<f64>,
    pub value: f64,
}

impl RadiusSet {
    /// Smallest attaining radius.
    pub fn min_radius(&self) -> f64 {
        self.radii[0]
    }
}

/// Radii `r` (gauge values up to the cover radius) at which the centered average of `|f|`
/// at `n` ties its maximum within [`RADIUS_TIE_TOL`].
pub fn argmax_radius_set(
    f: &LatticeFunction,
    body: &ConvexBody,
    beta: f64,
    n: &[i64],
) -> Result<RadiusSet> {
    let d = f.dim();
    check_dim(d, body.dim())?;
    check_dim(d, n.len())?;
    check_beta(beta, d)?;
    let Some((slo, shi)) = f.support_hull() else {
        return Ok(RadiusSet {
            point: n.to_vec(),
            radii: vec![0.0],
            value: 0.0,
        });
    };
    let cover = cover_radius(body, n, &slo, &shi);
    let ball = SortedBall::new(body, &vec![0.0; d], cover)?;
    let e = 1.0 - beta / d as f64;
    let mut m = vec![0i64; d];
    let mut acc = 0.0;
    let mut start = 0;
    let mut cands = Vec::with_capacity(ball.group_count());
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
        cands.push((ball.group_radius(j), acc / pow_count(end as f64, e)));
    }
    let value = cands.iter().map(|c| c.1).fold(0.0, f64::max);
    let radii = cands
        .iter()
        .filter(|c| c.1 >= value - RADIUS_TIE_TOL * value)
        .map(|c| c.0)
        .collect();
    Ok(RadiusSet {
        point: n.to_vec(),
        radii,
        value,
    })
}
