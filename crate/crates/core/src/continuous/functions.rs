use serde::{Deserialize, Serialize};

use crate::error::{invalid_input, invalid_param, Error, Result};
use crate::num::Dd;

fn check_increasing(xs: &[f64], what: &str) -> Result<()> {
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(invalid_input(format!("{what} must be finite")));
    }
    if xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid_input(format!("{what} must be strictly increasing")));
    }
    Ok(())
}

/// Compactly supported step function: `v_i` on `[b_{i-1}, b_i)`, zero outside `[b_0, b_M]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StepRepr")]
pub struct StepFunction1D {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

#[derive(Deserialize)]
struct StepRepr {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl TryFrom<StepRepr> for StepFunction1D {
    type Error = Error;
    fn try_from(r: StepRepr) -> Result<Self> {
        StepFunction1D::new(r.breakpoints, r.values)
    }
}

impl StepFunction1D {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(invalid_input("a step function needs at least two breakpoints"));
        }
        if values.len() + 1 != breakpoints.len() {
            return Err(invalid_input(format!(
                "{} breakpoints need {} values, got {}",
                breakpoints.len(),
                breakpoints.len() - 1,
                values.len()
            )));
        }
        check_increasing(&breakpoints, "breakpoints")?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(invalid_input("step values must be finite"));
        }
        Ok(StepFunction1D {
            breakpoints,
            values,
        })
    }

    /// `c·χ_{[a, b]}`.
    pub fn indicator(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::new(vec![a, b], vec![c])
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn pieces(&self) -> usize {
        self.values.len()
    }

    pub fn support_lo(&self) -> f64 {
        self.breakpoints[0]
    }

    pub fn support_hi(&self) -> f64 {
        self.breakpoints[self.breakpoints.len() - 1]
    }

    pub fn support_length(&self) -> f64 {
        self.support_hi() - self.support_lo()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let p = self.breakpoints.partition_point(|&b| b <= x);
        if p == 0 || p == self.breakpoints.len() {
            0.0
        } else {
            self.values[p - 1]
        }
    }

    /// Antiderivative `∫_{b_0}^x f` at every breakpoint.
    pub(crate) fn knot_integrals(&self) -> Vec<Dd> {
        let mut acc = Dd::ZERO;
        let mut out = Vec::with_capacity(self.breakpoints.len());
        out.push(acc);
        for (i, v) in self.values.iter().enumerate() {
            acc = acc.add_f64(v * (self.breakpoints[i + 1] - self.breakpoints[i]));
            out.push(acc);
        }
        out
    }

    /// `∫_{-∞}^x f`.
    pub fn antiderivative(&self, x: f64) -> f64 {
        let p = self.breakpoints.partition_point(|&b| b <= x);
        let knots = self.knot_integrals();
        if p == 0 {
            return 0.0;
        }
        if p == self.breakpoints.len() {
            return knots[p - 1].value();
        }
        knots[p - 1]
            .add_f64(self.values[p - 1] * (x - self.breakpoints[p - 1]))
            .value()
    }

    /// Sum of the absolute jumps, including those at the two ends of the support.
    pub fn variation(&self) -> f64 {
        let n = self.values.len();
        let inner: f64 = self.values.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
        self.values[0].abs() + inner + self.values[n - 1].abs()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn abs(&self) -> StepFunction1D {
        StepFunction1D {
            breakpoints: self.breakpoints.clone(),
            values: self.values.iter().map(|v| v.abs()).collect(),
        }
    }

    /// `x ↦ f(x / t)`.
    pub fn dilate(&self, t: f64) -> Result<StepFunction1D> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(invalid_param(format!("dilation factor must be positive, got {t}")));
        }
        StepFunction1D::new(
            self.breakpoints.iter().map(|b| b * t).collect(),
            self.values.clone(),
        )
    }

    pub fn scale(&self, c: f64) -> Result<StepFunction1D> {
        StepFunction1D::new(
            self.breakpoints.clone(),
            self.values.iter().map(|v| v * c).collect(),
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("finite values serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Piecewise-linear function through nodes `(x_i, y_i)`, constant beyond the end nodes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LinearRepr")]
pub struct PiecewiseLinear1D {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

#[derive(Deserialize)]
struct LinearRepr {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl TryFrom<LinearRepr> for PiecewiseLinear1D {
    type Error = Error;
    fn try_from(r: LinearRepr) -> Result<Self> {
        PiecewiseLinear1D::new(r.xs, r.ys)
    }
}

impl PiecewiseLinear1D {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.is_empty() || xs.len() != ys.len() {
            return Err(invalid_input(format!(
                "need matching nonempty node lists, got {} and {}",
                xs.len(),
                ys.len()
            )));
        }
        check_increasing(&xs, "node abscissae")?;
        if ys.iter().any(|y| !y.is_finite()) {
            return Err(invalid_input("node values must be finite"));
        }
        Ok(PiecewiseLinear1D { xs, ys })
    }

    /// Interpolant of samples `ys` at `start, start + step, …`.
    pub fn from_samples(start: f64, step: f64, ys: &[f64]) -> Result<Self> {
        if !(step > 0.0) {
            return Err(invalid_param("sample spacing must be positive"));
        }
        let xs = (0..ys.len()).map(|i| start + step * i as f64).collect();
        Self::new(xs, ys.to_vec())
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        let p = self.xs.partition_point(|&a| a <= x);
        let (x0, x1) = (self.xs[p - 1], self.xs[p]);
        let (y0, y1) = (self.ys[p - 1], self.ys[p]);
        let t = (x - x0) / (x1 - x0);
        y0 + t * (y1 - y0)
    }

    /// Slope of each piece between consecutive nodes.
    pub fn slopes(&self) -> Vec<f64> {
        self.xs
            .windows(2)
            .zip(self.ys.windows(2))
            .map(|(x, y)| (y[1] - y[0]) / (x[1] - x[0]))
            .collect()
    }

    pub fn lipschitz(&self) -> f64 {
        self.slopes().iter().fold(0.0, |m, s| m.max(s.abs()))
    }

    pub fn variation(&self) -> f64 {
        crate::num::compensated_sum(self.ys.windows(2).map(|w| (w[1] - w[0]).abs()))
    }

    pub fn sup_norm(&self) -> f64 {
        self.ys.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Step function whose pieces have width at most `width`, each carrying the mean of
    /// this function over the piece. The end values must vanish so the result has compact
    /// support.
    pub fn to_step(&self, width: f64) -> Result<StepFunction1D> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(invalid_param(format!("piece width must be positive, got {width}")));
        }
        let n = self.xs.len();
        if self.ys[0] != 0.0 || self.ys[n - 1] != 0.0 {
            return Err(invalid_input(
                "a piecewise-linear function with nonzero end values has no compact support",
            ));
        }
        if n < 2 {
            return StepFunction1D::new(vec![self.xs[0], self.xs[0] + width], vec![0.0]);
        }
        let mut bps = vec![self.xs[0]];
        let mut vals = Vec::new();
        for i in 0..n - 1 {
            let (x0, x1, y0, y1) = (self.xs[i], self.xs[i + 1], self.ys[i], self.ys[i + 1]);
            let m = ((x1 - x0) / width).ceil().max(1.0) as usize;
            let mut prev = (x0, y0);
            for j in 1..=m {
                let t = j as f64 / m as f64;
                let x = if j == m { x1 } else { x0 + t * (x1 - x0) };
                let y = if j == m { y1 } else { y0 + t * (y1 - y0) };
                if x > prev.0 {
                    bps.push(x);
                    vals.push(0.5 * (prev.1 + y));
                }
                prev = (x, y);
            }
        }
        StepFunction1D::new(bps, vals)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("finite values serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_basics() {
        let f = StepFunction1D::new(vec![0.0, 1.0, 3.0], vec![2.0, -1.0]).unwrap();
        assert_eq!(f.eval(-0.1), 0.0);
        assert_eq!(f.eval(0.0), 2.0);
        assert_eq!(f.eval(1.0), -1.0);
        assert_eq!(f.eval(3.0), 0.0);
        assert_eq!(f.antiderivative(2.0), 1.0);
        assert_eq!(f.antiderivative(10.0), 0.0);
        assert_eq!(f.variation(), 2.0 + 3.0 + 1.0);
        assert!(StepFunction1D::new(vec![0.0, 0.0], vec![1.0]).is_err());
        assert!(StepFunction1D::new(vec![0.0, 1.0], vec![]).is_err());
    }

    #[test]
    fn step_json() {
        let f = StepFunction1D::from_json(r#"{"breakpoints":[0,1],"values":[1]}"#).unwrap();
        assert_eq!(f, StepFunction1D::indicator(0.0, 1.0, 1.0).unwrap());
        assert_eq!(StepFunction1D::from_json(&f.to_json()).unwrap(), f);
        assert!(StepFunction1D::from_json(r#"{"breakpoints":[1,0],"values":[1]}"#).is_err());
    }

    #[test]
    fn linear_basics() {
        let g = PiecewiseLinear1D::new(vec![0.0, 1.0], vec![0.0, 1.0]).unwrap();
        assert_eq!(g.eval(-3.0), 0.0);
        assert_eq!(g.eval(0.25), 0.25);
        assert_eq!(g.eval(7.0), 1.0);
        assert_eq!(g.slopes(), vec![1.0]);
        assert!(g.to_step(0.1).is_err());
        let tent = PiecewiseLinear1D::new(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 0.0]).unwrap();
        let s = tent.to_step(0.25).unwrap();
        assert_eq!(s.pieces(), 8);
        assert_eq!(s.eval(0.1), 0.125);
        assert!((s.antiderivative(2.0) - 1.0).abs() < 1e-15);
    }
}
