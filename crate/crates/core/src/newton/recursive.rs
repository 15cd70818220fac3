use log::info;
use serde::{Deserialize, Serialize};

use super::{newton_solve_with, LevelReport, NewtonConfig, Outcome, SolveReport};
use crate::assembly::{Discrete, LevelFactory};
use crate::error::{Error, Result};
use crate::problems::ConditionSchedule;
use crate::scalar::Real;
use crate::solver::MultifrontalLu;
use crate::wavelet::{FieldGrid2D, Transform2D};

/// How levels above the first obtain their initial guess.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GuessSource {
    Zeros,
    Prolongated,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecursionPlan<T> {
    pub j_start: usize,
    pub j_max: usize,
    pub schedule: ConditionSchedule<T>,
    pub guess: GuessSource,
    /// Required detail-coefficient estimate at `j_max`, per field.
    pub error_tolerance: Option<T>,
    /// Extra levels allowed when the tolerance is missed.
    pub max_restarts: usize,
}

impl<T: Real> RecursionPlan<T> {
    /// Direct solve on one level with the true conditions.
    pub fn single(level: usize, schedule: ConditionSchedule<T>) -> Self {
        Self { j_start: level, j_max: level, schedule, guess: GuessSource::Zeros, error_tolerance: None, max_restarts: 0 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.j_start == 0 || self.j_max < self.j_start {
            return Err(Error::InvalidParameter(format!("need 1 <= j_start <= j_max, got {}..{}", self.j_start, self.j_max)));
        }
        self.schedule.validate()?;
        let m = self.j_max - self.j_start + 1;
        if self.schedule.len() != m {
            return Err(Error::InvalidParameter(format!(
                "schedule length {} does not match the {m} levels {}..={}",
                self.schedule.len(),
                self.j_start,
                self.j_max
            )));
        }
        Ok(())
    }
}

/// Final state on the finest level reached plus the full report.
#[derive(Debug, Clone)]
pub struct RecursiveOutcome<T> {
    pub level: usize,
    pub state: Vec<T>,
    pub report: SolveReport,
}

fn split_fields<T: Real>(state: &[T], fields: usize, level: usize, px: usize, pt: usize) -> Result<Vec<FieldGrid2D<T>>> {
    let n = state.len() / fields;
    (0..fields)
        .map(|f| FieldGrid2D::from_values(level, px, pt, state[f * n..(f + 1) * n].to_vec()))
        .collect()
}

/// Per-field detail-coefficient error estimate.
pub fn field_estimates<T: Real>(state: &[T], fields: usize, level: usize, px: usize, pt: usize) -> Result<Vec<f64>> {
    let tr = Transform2D::new(px, pt)?;
    split_fields(state, fields, level, px, pt)?
        .iter()
        .map(|f| Ok(tr.estimate_error(f)?.to_f64().unwrap_or(f64::NAN)))
        .collect()
}

/// Multilevel solve: relaxed conditions on coarse levels, each solution
/// prolongated as the next level's guess, error check at the finest level.
pub fn recursive_solve<T: Real, F: LevelFactory<T>>(
    factory: &F,
    plan: &RecursionPlan<T>,
    config: &NewtonConfig<T>,
) -> Result<RecursiveOutcome<T>> {
    plan.validate()?;
    let mut plan = plan.clone();
    let mut levels: Vec<LevelReport> = Vec::new();
    let mut previous: Option<(usize, Vec<T>)> = None;
    let mut names: Vec<String> = Vec::new();
    let mut g = 0;
    let mut j = plan.j_start;
    let mut restarts = 0;
    loop {
        let problem = factory.at_level(j)?;
        if names.is_empty() {
            names = problem.names().iter().map(|s| s.to_string()).collect();
        }
        let grid = problem.grid().clone();
        let fields = problem.fields();
        let (delta, chi) = plan.schedule.entry(g.min(plan.schedule.len() - 1));
        let targets = problem.targets(delta, chi)?;
        let (guess, source) = match (&previous, plan.guess) {
            (Some((pj, prev)), GuessSource::Prolongated) if *pj + 1 == j => {
                let tr = Transform2D::new(grid.px, grid.pt)?;
                let mut out = Vec::with_capacity(problem.dofs());
                for f in split_fields(prev, fields, *pj, grid.px, grid.pt)? {
                    out.extend_from_slice(tr.prolongate(&f)?.values());
                }
                (out, "prolongated")
            }
            _ => (vec![T::zero(); problem.dofs()], "zeros"),
        };
        let mut solver = MultifrontalLu::new();
        let (state, mut report) = newton_solve_with(&problem, &guess, &targets, config, &mut solver)?;
        report.guess = source.into();
        report.delta = delta.to_f64();
        report.chi = chi.to_f64();
        if report.converged() && grid.level >= 2 {
            report.error_estimate = field_estimates(&state, fields, grid.level, grid.px, grid.pt)?;
        }
        let converged = report.converged();
        let estimate = report.error_estimate.clone();
        levels.push(report);
        if !converged {
            let outcome = levels.last().unwrap().outcome.clone();
            return Ok(RecursiveOutcome {
                level: j,
                state,
                report: SolveReport { problem: String::new(), fields: names, levels, outcome, error_estimate: estimate },
            });
        }
        if j < plan.j_max {
            previous = Some((j, state));
            j += 1;
            g += 1;
            continue;
        }
        let worst = estimate.iter().copied().fold(0.0f64, f64::max);
        let outcome = match plan.error_tolerance {
            Some(tol) if worst > tol.to_f64().unwrap_or(f64::INFINITY) => {
                if restarts < plan.max_restarts {
                    restarts += 1;
                    info!("estimate {worst:e} above tolerance; continuing to level {}", j + 1);
                    plan.j_max += 1;
                    previous = Some((j, state));
                    j += 1;
                    continue;
                }
                Outcome::IncreaseJmax { estimate: worst, tolerance: tol.to_f64().unwrap_or(f64::NAN) }
            }
            _ => Outcome::Converged,
        };
        return Ok(RecursiveOutcome {
            level: j,
            state,
            report: SolveReport { problem: String::new(), fields: names, levels, outcome, error_estimate: estimate },
        });
    }
}
