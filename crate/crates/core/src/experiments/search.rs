use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generators::{rng_from, trial_seed};
use super::theorems::thm2_ratio_of;
use crate::continuous::{var_q_frac_max_cont, StepFunction1D};
use crate::error::{invalid_param, Result};
use crate::lattice::LatticeFunction;

/// Relative tolerance of the adaptive variations evaluated during a continuous search.
pub const SEARCH_ADAPTIVE_TOL: f64 = 1e-5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    /// Step functions on `R`, ratio `Var_q(M̃_β f) / Var(f)`.
    Thm1,
    /// Functions on `Z`, ratio `Var_q(M̃_β f) / ‖f'‖_1`.
    Thm2,
}

/// Best function found, in the standard JSON form of its type.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Witness {
    Lattice(LatticeFunction),
    Step(StepFunction1D),
}

impl Witness {
    /// JSON of the function itself, readable by `LatticeFunction::from_json` or
    /// `StepFunction1D::from_json`.
    pub fn function_json(&self) -> String {
        match self {
            Witness::Lattice(f) => f.to_json(),
            Witness::Step(f) => f.to_json(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub mode: SearchMode,
    pub beta: f64,
    pub seed: u64,
    pub best_ratio: f64,
    /// Best ratio among the starting functions.
    pub start_ratio: f64,
    pub witness: Witness,
    pub evaluations: u64,
}

impl SearchResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// `Var_q(M̃_β f) / ‖f'‖_1` with `q = 1/(1-β)`, using the upper tail bound.
pub fn thm2_ratio(f: &LatticeFunction, beta: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&beta) {
        return Err(invalid_param(format!("beta = {beta} must lie in [0, 1)")));
    }
    thm2_ratio_of(f, beta)
}

fn build(mode: SearchMode, vals: &[f64]) -> Result<Witness> {
    Ok(match mode {
        SearchMode::Thm2 => Witness::Lattice(LatticeFunction::from_slice_1d(0, vals)?),
        SearchMode::Thm1 => {
            let bps = (0..=vals.len()).map(|i| i as f64).collect();
            Witness::Step(StepFunction1D::new(bps, vals.to_vec())?)
        }
    })
}

fn ratio(mode: SearchMode, beta: f64, w: &Witness) -> Result<f64> {
    match w {
        Witness::Lattice(f) => thm2_ratio_of(f, beta),
        Witness::Step(f) => {
            let var = f.variation();
            if var == 0.0 {
                return Ok(0.0);
            }
            let v = var_q_frac_max_cont(f, beta, 1.0 / (1.0 - beta), SEARCH_ADAPTIVE_TOL)?;
            debug_assert_eq!(mode, SearchMode::Thm1);
            Ok(v.value / var)
        }
    }
}

fn normalize(v: &mut [f64]) -> bool {
    let m = v.iter().copied().fold(0.0, f64::max);
    if m <= 0.0 {
        return false;
    }
    v.iter_mut().for_each(|x| *x /= m);
    true
}

struct Climb {
    ratio: f64,
    start: f64,
    vals: Vec<f64>,
    evals: u64,
}

fn climb(mode: SearchMode, beta: f64, size: usize, iterations: usize, restart: usize, seed: u64)
    -> Result<Climb> {
    let mut rng = rng_from(trial_seed(seed, restart as u64));
    let mut vals: Vec<f64> = if restart == 0 {
        let mut v = vec![0.0; size];
        v[0] = 1.0;
        v
    } else {
        (0..size).map(|_| rng.gen::<f64>()).collect()
    };
    if !normalize(&mut vals) {
        vals[0] = 1.0;
    }
    let mut best = ratio(mode, beta, &build(mode, &vals)?)?;
    let start = best;
    let mut evals = 1;
    for _ in 0..iterations {
        let i = rng.gen_range(0..size);
        let mut cand = vals.clone();
        cand[i] = if rng.gen_bool(0.5) {
            rng.gen::<f64>()
        } else {
            (cand[i] + rng.gen_range(-0.2..0.2)).clamp(0.0, 1.0)
        };
        if !normalize(&mut cand) {
            continue;
        }
        let r = ratio(mode, beta, &build(mode, &cand)?)?;
        evals += 1;
        if r > best {
            best = r;
            vals = cand;
        }
    }
    Ok(Climb { ratio: best, start, vals, evals })
}

/// Coordinate-wise hill climbing for large variation ratios.
///
/// Values live in `[0, 1]` and are renormalized to maximum 1 after every move. Restart 0
/// starts from a point mass (the indicator of the first piece for step functions), the
/// others from i.i.d. uniform values. Restarts run in parallel; the result only depends
/// on `seed`.
pub fn extremal_search(
    mode: SearchMode,
    beta: f64,
    size: usize,
    iterations: usize,
    restarts: usize,
    seed: u64,
) -> Result<SearchResult> {
    if !(0.0..1.0).contains(&beta) {
        return Err(invalid_param(format!("beta = {beta} must lie in [0, 1)")));
    }
    let cap = match mode {
        SearchMode::Thm2 => 64,
        SearchMode::Thm1 => 24,
    };
    if size == 0 || size > cap {
        return Err(invalid_param(format!("size must lie in 1..={cap}, got {size}")));
    }
    let restarts = restarts.max(1);
    let climbs: Vec<Climb> = (0..restarts)
        .into_par_iter()
        .map(|r| climb(mode, beta, size, iterations, r, seed))
        .collect::<Result<_>>()?;
    let mut best = 0;
    for (i, c) in climbs.iter().enumerate() {
        if c.ratio > climbs[best].ratio {
            best = i;
        }
    }
    let start_ratio = climbs.iter().map(|c| c.start).fold(f64::NEG_INFINITY, f64::max);
    let evaluations = climbs.iter().map(|c| c.evals).sum();
    let c = &climbs[best];
    let mut witness = build(mode, &c.vals)?;
    if let Witness::Lattice(f) = &witness {
        witness = Witness::Lattice(f.trimmed());
    }
    Ok(SearchResult {
        mode,
        beta,
        seed,
        best_ratio: c.ratio,
        start_ratio,
        witness,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sharp_case_and_replay() {
        let r = extremal_search(SearchMode::Thm2, 0.0, 8, 200, 3, 4).unwrap();
        assert!(r.best_ratio >= 1.0 - 1e-9 && r.best_ratio <= 1.0 + 1e-9, "{}", r.best_ratio);
        let r = extremal_search(SearchMode::Thm2, 0.5, 8, 200, 3, 4).unwrap();
        let again = extremal_search(SearchMode::Thm2, 0.5, 8, 200, 3, 4).unwrap();
        assert_eq!(r, again);
        let Witness::Lattice(f) = &r.witness else { panic!() };
        assert_eq!(thm2_ratio(f, 0.5).unwrap(), r.best_ratio);
        assert!(r.best_ratio >= r.start_ratio && r.best_ratio <= 2.0);
        let z = extremal_search(SearchMode::Thm2, 0.5, 8, 0, 1, 4).unwrap();
        let d = LatticeFunction::point_mass(&[0], 1.0).unwrap();
        assert_eq!(z.best_ratio, thm2_ratio(&d, 0.5).unwrap());
        assert!(extremal_search(SearchMode::Thm2, 0.5, 65, 1, 1, 0).is_err());
        assert!(extremal_search(SearchMode::Thm1, 0.5, 25, 1, 1, 0).is_err());
    }

    #[test]
    fn continuous_search_runs() {
        let r = extremal_search(SearchMode::Thm1, 0.5, 3, 4, 2, 1).unwrap();
        assert!(r.best_ratio > 0.0 && r.best_ratio <= 8f64.sqrt());
        let back = SearchResult::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}
