use serde::{Deserialize, Serialize};

use crate::grid::GridSpec;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    Running,
    Converged,
    Diverged { reason: String },
    /// Converged, but the error estimate misses the requested tolerance.
    IncreaseJmax { estimate: f64, tolerance: f64 },
}

/// Advisory conditioning record for the first Newton system of a level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solvability {
    pub rhs_norm_2: f64,
    pub rhs_norm_inf: f64,
    /// `kappa_1(K_UU)` estimate
    pub condition_estimate: Option<f64>,
    pub estimate_settled: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelReport {
    pub level: usize,
    pub nx: usize,
    pub nt: usize,
    pub dofs: usize,
    pub unknowns: usize,
    pub guess: String,
    pub delta: Option<f64>,
    pub chi: Option<f64>,
    pub r0_norm: f64,
    pub residual_history: Vec<f64>,
    pub step_lengths: Vec<f64>,
    pub iterations: usize,
    pub line_search_activations: usize,
    pub refinement_warnings: usize,
    pub solvability: Option<Solvability>,
    /// detail-coefficient estimate per field
    pub error_estimate: Vec<f64>,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "is_zero")]
    #[serde(default)]
    pub wall_time_s: f64,
}

fn is_zero(v: &f64) -> bool {
    *v == 0.0
}

impl LevelReport {
    pub fn new<T: Real>(grid: &GridSpec<T>, fields: usize, unknowns: usize) -> Self {
        Self {
            level: grid.level,
            nx: grid.nx,
            nt: grid.nt,
            dofs: grid.nodes() * fields,
            unknowns,
            guess: "given".into(),
            delta: None,
            chi: None,
            r0_norm: 0.0,
            residual_history: Vec::new(),
            step_lengths: Vec::new(),
            iterations: 0,
            line_search_activations: 0,
            refinement_warnings: 0,
            solvability: None,
            error_estimate: Vec::new(),
            outcome: Outcome::Running,
            wall_time_s: 0.0,
        }
    }

    pub fn converged(&self) -> bool {
        matches!(self.outcome, Outcome::Converged)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub problem: String,
    pub fields: Vec<String>,
    pub levels: Vec<LevelReport>,
    pub outcome: Outcome,
    /// final per-field estimate at the finest level solved
    pub error_estimate: Vec<f64>,
}

impl SolveReport {
    pub fn total_iterations(&self) -> usize {
        self.levels.iter().map(|l| l.iterations).sum()
    }

    /// Report without wall-clock timings, for bitwise comparisons.
    pub fn without_timings(&self) -> Self {
        let mut r = self.clone();
        r.levels.iter_mut().for_each(|l| l.wall_time_s = 0.0);
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
