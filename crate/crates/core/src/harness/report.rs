use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sets::DefectPair;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Converges,
    Diverges,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Converges => "CONVERGES",
            Verdict::Diverges => "DIVERGES",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

impl FromStr for Verdict {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "CONVERGES" => Ok(Verdict::Converges),
            "DIVERGES" => Ok(Verdict::Diverges),
            "INCONCLUSIVE" => Ok(Verdict::Inconclusive),
            _ => Err(Error::Parse(format!("unknown verdict `{s}`"))),
        }
    }
}

/// Outcome of one experiment.
///
/// JSON schema (stable): `experiment_id` string, `indices` array of
/// integers, `defect_series` array of `{lower_defect, upper_defect}`,
/// `deviation_series` array of numbers (empty when the experiment has no
/// scalar deviation), `tolerance` number, `verdict` one of `CONVERGES`,
/// `DIVERGES`, `INCONCLUSIVE`, `notes` array of strings, `metrics` object of
/// named numbers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub experiment_id: String,
    pub indices: Vec<u64>,
    pub defect_series: Vec<DefectPair>,
    pub deviation_series: Vec<f64>,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub notes: Vec<String>,
    pub metrics: BTreeMap<String, f64>,
}

impl ConvergenceReport {
    pub fn new(experiment_id: impl Into<String>, indices: Vec<u64>, tolerance: f64) -> Self {
        ConvergenceReport {
            experiment_id: experiment_id.into(),
            indices,
            defect_series: Vec::new(),
            deviation_series: Vec::new(),
            tolerance,
            verdict: Verdict::Inconclusive,
            notes: Vec::new(),
            metrics: BTreeMap::new(),
        }
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn metric(&mut self, key: &str, value: f64) {
        self.metrics.insert(key.to_string(), value);
    }

    /// `max(lower, upper)` per index.
    pub fn max_series(&self) -> Vec<f64> {
        self.defect_series.iter().map(DefectPair::max).collect()
    }

    pub fn final_defect(&self) -> Option<f64> {
        self.defect_series.last().map(DefectPair::max)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Header `n,lower_defect,upper_defect,deviation`; missing columns stay
    /// empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,lower_defect,upper_defect,deviation\n");
        for (k, n) in self.indices.iter().enumerate() {
            let (lo, up) = match self.defect_series.get(k) {
                Some(d) => (d.lower_defect.to_string(), d.upper_defect.to_string()),
                None => (String::new(), String::new()),
            };
            let dev = self.deviation_series.get(k).map(f64::to_string).unwrap_or_default();
            writeln!(out, "{n},{lo},{up},{dev}").unwrap();
        }
        out
    }
}

/// Position of the index nearest `n_max / 2`.
pub(crate) fn mid_position(indices: &[u64]) -> usize {
    let target = *indices.last().unwrap() as f64 / 2.0;
    let mut best = 0;
    for (k, n) in indices.iter().enumerate() {
        if (*n as f64 - target).abs() < (indices[best] as f64 - target).abs() {
            best = k;
        }
    }
    best
}

/// Verdict for a series of defect components (each component one value per
/// index).
///
/// CONVERGES: the final `max` over components is at most `tol` and at most
/// its value at the index nearest `n_max / 2` plus `slack`. DIVERGES: some
/// component stays at or above `2 tol` over the last half of the series.
pub fn decide(indices: &[u64], components: &[Vec<f64>], tol: f64, slack: f64) -> Verdict {
    if indices.is_empty() || components.is_empty() {
        return Verdict::Inconclusive;
    }
    let len = indices.len();
    let max_at = |k: usize| components.iter().map(|c| c[k]).fold(0.0, f64::max);
    let last = max_at(len - 1);
    if last <= tol && last <= max_at(mid_position(indices)) + slack {
        return Verdict::Converges;
    }
    let persistent = components.iter().any(|c| c[len / 2..].iter().all(|v| *v >= 2.0 * tol));
    if persistent {
        Verdict::Diverges
    } else {
        Verdict::Inconclusive
    }
}

/// [`decide`] on the lower and upper defects.
pub fn decide_pairs(indices: &[u64], series: &[DefectPair], tol: f64, slack: f64) -> Verdict {
    let lower = series.iter().map(|d| d.lower_defect).collect();
    let upper = series.iter().map(|d| d.upper_defect).collect();
    decide(indices, &[lower, upper], tol, slack)
}

pub(crate) fn check_indices(indices: &[u64]) -> Result<()> {
    if indices.is_empty() {
        return Err(Error::InvalidParameter("n list is empty".into()));
    }
    if indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("n list must be strictly increasing".into()));
    }
    if indices[0] == 0 {
        return Err(Error::InvalidParameter("family index n must be >= 1".into()));
    }
    Ok(())
}
