//! Structured results: property-check reports and solver reports.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// First failing sample of a property check, with the offending function
/// serialized as index -> value pairs plus any scalar context.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Witness {
    pub law: String,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub context: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub function: BTreeMap<usize, f64>,
}

impl Witness {
    pub fn new(law: impl Into<String>) -> Self {
        Witness {
            law: law.into(),
            context: BTreeMap::new(),
            function: BTreeMap::new(),
        }
    }

    pub fn with_context(mut self, key: &str, value: f64) -> Self {
        self.context.insert(key.to_string(), value);
        self
    }

    pub fn with_function(mut self, values: &[f64]) -> Self {
        for (i, v) in values.iter().enumerate() {
            if *v != 0.0 {
                self.function.insert(i, *v);
            }
        }
        self
    }
}

/// Outcome of one property suite: sample count, violation count, and the
/// first witness if any.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PropertyReport {
    pub name: String,
    pub samples: usize,
    pub violations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl PropertyReport {
    pub fn new(name: impl Into<String>) -> Self {
        PropertyReport {
            name: name.into(),
            samples: 0,
            violations: 0,
            witness: None,
        }
    }

    /// Record one sample; `failure` carries the witness when the law failed.
    pub fn record(&mut self, failure: Option<Witness>) {
        self.samples += 1;
        if let Some(w) = failure {
            self.violations += 1;
            if self.witness.is_none() {
                self.witness = Some(w);
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Solver outcome.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveReport {
    pub converged: bool,
    pub iters: u64,
    /// Final value of the energy functional.
    pub energy: f64,
    /// Constraint value J(u) for constrained runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constraint: Option<f64>,
    /// Lagrange multiplier for constrained runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multiplier: Option<f64>,
    /// Sup norm of the stationarity residual.
    pub residual_inf: f64,
    pub wall_ms: f64,
    pub seed: u64,
    /// Coordinates of the peak |u| vertex (diagnostic for translation drift).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub peak: Option<Vec<i64>>,
    /// Peak location of every restart, by (restart id, coordinates).
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub restart_peaks: Vec<(u64, Vec<i64>)>,
    /// Restarts that converged, out of those attempted.
    pub converged_restarts: u32,
    pub restarts: u32,
    /// Times a converged iterate changed sign and the run was redone from |u|.
    pub sign_restarts: u32,
}

/// One row of a multiplier sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub t: f64,
    pub energy: f64,
    pub lambda: f64,
    pub residual: f64,
    pub iters: u64,
    pub seed: u64,
    pub converged: bool,
}

/// A multiplier sweep with fitted log-log slopes of lambda(t).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepSummary {
    pub rows: Vec<SweepRow>,
    /// Least-squares slope over all converged rows.
    pub slope_all: f64,
    /// Two-point slope at the small-t end.
    pub slope_small_t: f64,
    /// Two-point slope at the large-t end.
    pub slope_large_t: f64,
    /// Whether p*I/(rt) <= lambda <= q*I/(rt) held on every converged row.
    pub sandwich_ok: bool,
    /// Smallest observed ||grad u||_p / ||u||_r over the sweep solutions.
    pub sobolev_ratio_min: f64,
    pub all_converged: bool,
}
