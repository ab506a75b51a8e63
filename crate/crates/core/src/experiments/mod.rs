//! Verification experiments: randomized checks of the variation bounds, empirical constants
//! for the gradient bounds, dilation scaling fits, diagnostics of the proof structure and an
//! extremal search.
//!
//! Every trial draws its input from a seed derived from the run seed and the trial index,
//! so any record can be replayed on its own.

pub mod generators;
mod lemmas;
mod scaling;
mod search;
mod theorems;

pub use lemmas::{
    local_extrema_strings, monotone_segment_check, radius_stability_experiment,
    strings_alternate, verify_radius_stability, verify_segments, ExtremumKind, ExtremumString,
};
pub use scaling::{fit_slope, scaling_experiment};
pub use search::{extremal_search, thm2_ratio, SearchMode, SearchResult, Witness};
pub use theorems::{
    check_thm3_admissible, domination_constant_check, pointwise_regularization_check,
    thm1_trial, thm2_trial, verify_thm1, verify_thm2, verify_thm3, Thm3Part,
};

use std::collections::BTreeMap;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Slack allowed when comparing a ratio with its bound.
pub const BOUND_SLACK: f64 = 1e-9;

/// Heuristic stability factor for empirical constants: the maximum over the second half of
/// the trials must stay below this multiple of the first-half maximum.
pub const STABILITY_FACTOR: f64 = 1.1;

/// One trial of an experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub index: usize,
    /// Seed that regenerates the input.
    pub seed: u64,
    pub descriptor: String,
    pub params: BTreeMap<String, f64>,
    pub ratio: f64,
    pub bound: Option<f64>,
    pub pass: bool,
    /// Trials whose ratio is undefined (e.g. zero variation); they carry no verdict.
    pub degenerate: bool,
}

impl TrialRecord {
    pub(crate) fn new(index: usize, seed: u64, descriptor: impl Into<String>) -> Self {
        TrialRecord {
            index,
            seed,
            descriptor: descriptor.into(),
            params: BTreeMap::new(),
            ratio: 0.0,
            bound: None,
            pass: true,
            degenerate: false,
        }
    }

    pub(crate) fn param(mut self, k: &str, v: f64) -> Self {
        self.params.insert(k.to_string(), v);
        self
    }

    /// Sets the ratio and judges it against `bound` with [`BOUND_SLACK`].
    pub(crate) fn judged(mut self, ratio: f64, bound: Option<f64>) -> Self {
        self.ratio = ratio;
        self.bound = bound;
        self.pass = ratio.is_finite() && bound.map_or(true, |b| ratio <= b + BOUND_SLACK);
        self
    }

    pub(crate) fn degenerate(mut self) -> Self {
        self.degenerate = true;
        self.pass = true;
        self
    }
}

/// A fitted log-log slope compared with its prediction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub quantity: String,
    pub slope: f64,
    pub predicted: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Outcome of an experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub experiment: String,
    pub params: BTreeMap<String, Value>,
    pub trials: Vec<TrialRecord>,
    pub max_ratio: f64,
    pub pass: bool,
    #[serde(default)]
    pub fits: Vec<Fit>,
    #[serde(default)]
    pub notes: Vec<String>,
    /// Wall-clock time; not serialized so reports stay reproducible.
    #[serde(skip)]
    pub runtime: Duration,
}

impl VerificationReport {
    pub(crate) fn new(experiment: &str) -> Self {
        VerificationReport {
            experiment: experiment.to_string(),
            params: BTreeMap::new(),
            trials: Vec::new(),
            max_ratio: 0.0,
            pass: true,
            fits: Vec::new(),
            notes: Vec::new(),
            runtime: Duration::ZERO,
        }
    }

    pub(crate) fn param(mut self, k: &str, v: impl Into<Value>) -> Self {
        self.params.insert(k.to_string(), v.into());
        self
    }

    /// Aggregates the trials; `extra` carries verdicts beyond the per-trial bounds.
    pub(crate) fn finish(mut self, extra: bool, started: std::time::Instant) -> Self {
        self.max_ratio = self
            .trials
            .iter()
            .filter(|t| !t.degenerate)
            .map(|t| t.ratio)
            .fold(0.0, f64::max);
        self.pass = extra && self.trials.iter().all(|t| t.pass) && self.fits.iter().all(|f| f.pass);
        self.runtime = started.elapsed();
        self
    }

    /// Trials that violated their bound.
    pub fn violations(&self) -> impl Iterator<Item = &TrialRecord> {
        self.trials.iter().filter(|t| !t.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> crate::Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// One row per trial; parameters are packed as `key=value` pairs separated by `;`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,seed,descriptor,params,ratio,bound,pass,degenerate\n");
        for t in &self.trials {
            let params: Vec<String> = t.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let bound = t.bound.map(|b| b.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{},{},\"{}\",{},{},{},{},{}\n",
                t.index,
                t.seed,
                t.descriptor.replace('"', "\"\""),
                params.join(";"),
                t.ratio,
                bound,
                t.pass,
                t.degenerate
            ));
        }
        out
    }
}

/// Side bound of the random boxes drawn for `d`-dimensional experiments.
pub fn nd_side(d: usize) -> i64 {
    if d <= 2 {
        5
    } else {
        3
    }
}

/// Regenerates the input of a recorded trial from its seed and the report parameters.
///
/// Returns `None` for experiments whose trials are not drawn from a seed.
pub fn trial_input(report: &VerificationReport, trial: &TrialRecord) -> Option<Witness> {
    use generators::{lattice_1d, lattice_nd, rng_from, step_1d};
    let int = |k: &str| report.params.get(k).and_then(Value::as_u64).map(|v| v as usize);
    let mut rng = rng_from(trial.seed);
    match report.experiment.as_str() {
        "thm2" | "segments" | "radius" => {
            Some(Witness::Lattice(lattice_1d(&mut rng, int("support_len")?).0))
        }
        "thm1" => Some(Witness::Step(step_1d(&mut rng, int("pieces")?).0)),
        "thm3" | "pointwise" | "domination" => {
            let d = int("d")?;
            Some(Witness::Lattice(lattice_nd(&mut rng, d, nd_side(d)).0))
        }
        _ => None,
    }
}

/// First-half and second-half maxima of a sequence, and whether the second stays below
/// [`STABILITY_FACTOR`] times the first.
pub fn stability(ratios: &[f64]) -> (f64, f64, bool) {
    let h = ratios.len() / 2;
    let first = ratios[..h].iter().copied().fold(0.0, f64::max);
    let second = ratios[h..].iter().copied().fold(0.0, f64::max);
    let ok = ratios.iter().all(|r| r.is_finite())
        && (second <= first || second < STABILITY_FACTOR * first);
    (first, second, ok)
}
