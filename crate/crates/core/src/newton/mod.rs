//! Globally convergent Newton–Raphson on the unknown-only system and the
//! recursive multilevel driver.

mod recursive;
mod report;

pub use recursive::{field_estimates, recursive_solve, GuessSource, RecursionPlan, RecursiveOutcome};
pub use report::{LevelReport, Outcome, SolveReport, Solvability};

use std::time::Instant;

use log::{debug, info, warn};

use crate::assembly::{reduce_to_u, Discrete};
use crate::error::{Error, Result};
use crate::grid::{classify_fields, gather, scatter, DofPartition};
use crate::scalar::{norm2, Real};
use crate::solver::{inverse_norm_one, LinearSolver, MultifrontalLu};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonConfig<T> {
    /// Stop when `||R_U|| / ||R_0|| < rel_tol`.
    pub rel_tol: T,
    /// Also stop once `||R_U|| <= abs_tol`; zero disables the floor.
    pub abs_tol: T,
    pub max_iterations: usize,
    pub backtrack: T,
    pub sufficient_decrease: T,
    pub max_halvings: usize,
    /// Abort when `||R_U|| > divergence_factor * ||R_0||`.
    pub divergence_factor: T,
    /// Estimate `kappa_1(K_UU)` on the first iteration of each level.
    pub estimate_condition: bool,
    /// Seed for the condition estimator's start vector.
    pub seed: Option<u64>,
}

impl<T: Real> Default for NewtonConfig<T> {
    fn default() -> Self {
        Self {
            rel_tol: T::lit(1e-6),
            abs_tol: T::zero(),
            max_iterations: 50,
            backtrack: T::lit(0.5),
            sufficient_decrease: T::lit(1e-4),
            max_halvings: 25,
            divergence_factor: T::lit(1e6),
            estimate_condition: true,
            seed: None,
        }
    }
}

impl<T: Real> NewtonConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > T::zero()) {
            return Err(Error::InvalidParameter("rel_tol must be positive".into()));
        }
        if !(self.abs_tol >= T::zero()) {
            return Err(Error::InvalidParameter("abs_tol must be non-negative".into()));
        }
        if !(self.backtrack > T::zero() && self.backtrack < T::one()) {
            return Err(Error::InvalidParameter("backtrack factor must lie in (0, 1)".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidParameter("max_iterations must be at least 1".into()));
        }
        Ok(())
    }
}

fn f64_of<T: Real>(v: T) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

/// Norm of the residual restricted to the unknowns, or `None` when the
/// state is outside the residual's domain.
fn unknown_norm<T: Real, D: Discrete<T>>(problem: &D, state: &[T], part: &DofPartition) -> Option<(T, Vec<T>)> {
    let r = problem.residual(state).ok()?;
    let n = norm2(&gather(&r.values, &part.unknown).ok()?);
    n.is_finite().then_some((n, r.values))
}

/// Condition and right-hand-side diagnostics for a factored `K_UU`.
pub fn solvability_diagnostics<T: Real, S: LinearSolver<T>>(
    kuu: &crate::sparse::SparseTangent<T>,
    solver: &S,
    rhs: &[T],
    seed: Option<u64>,
) -> Solvability {
    let (kappa, settled) = match inverse_norm_one(solver, kuu.n_rows(), seed) {
        Ok((inv, settled)) => (Some(f64_of(inv * kuu.norm_one())), settled),
        Err(_) => (None, false),
    };
    Solvability {
        rhs_norm_2: f64_of(norm2(rhs)),
        rhs_norm_inf: f64_of(rhs.iter().fold(T::zero(), |m, v| m.max(v.abs()))),
        condition_estimate: kappa,
        estimate_settled: settled,
    }
}

/// Newton–Raphson from `guess` toward the initial/boundary values in
/// `targets`. The initial and boundary corrections enter the first
/// iteration only; afterwards those entries stay fixed at their targets.
pub fn newton_solve<T: Real, D: Discrete<T>>(
    problem: &D,
    guess: &[T],
    targets: &[T],
    config: &NewtonConfig<T>,
) -> Result<(Vec<T>, LevelReport)> {
    let mut solver = MultifrontalLu::new();
    newton_solve_with(problem, guess, targets, config, &mut solver)
}

pub fn newton_solve_with<T: Real, D: Discrete<T>, S: LinearSolver<T>>(
    problem: &D,
    guess: &[T],
    targets: &[T],
    config: &NewtonConfig<T>,
    solver: &mut S,
) -> Result<(Vec<T>, LevelReport)> {
    config.validate()?;
    problem.check_state(guess)?;
    problem.check_state(targets)?;
    let started = Instant::now();
    let grid = problem.grid();
    let part = classify_fields(grid, problem.fields());
    let mut report = LevelReport::new(grid, problem.fields(), part.unknown.len());
    let mut state = guess.to_vec();
    let df_i: Vec<T> = part.initial.iter().map(|&i| targets[i] - state[i]).collect();
    let df_b: Vec<T> = part.boundary.iter().map(|&i| targets[i] - state[i]).collect();
    let mut k = problem.pattern()?;
    let mut residual = problem.residual(&state)?.values;
    let mut r0 = T::zero();
    for it in 0..=config.max_iterations {
        let first = it == 0;
        problem.fill_tangent(&state, &mut k)?;
        let (kuu, rhs) = reduce_to_u(&k, &residual, &part, &df_i, &df_b, first)?;
        let rhs_norm = norm2(&rhs);
        if first {
            r0 = rhs_norm;
            report.r0_norm = f64_of(r0);
            report.residual_history.push(f64_of(r0));
            if r0 <= config.abs_tol {
                scatter(&mut state, &part.initial, &gather(targets, &part.initial)?)?;
                scatter(&mut state, &part.boundary, &gather(targets, &part.boundary)?)?;
                report.outcome = Outcome::Converged;
                break;
            }
        }
        if it == config.max_iterations {
            report.outcome = Outcome::Diverged { reason: format!("no convergence in {} iterations", config.max_iterations) };
            break;
        }
        solver.factor(&kuu)?;
        let (delta, stats) = solver.solve(&rhs)?;
        if !stats.refinement_improved {
            report.refinement_warnings += 1;
        }
        if first && config.estimate_condition {
            report.solvability = Some(solvability_diagnostics(&kuu, solver, &rhs, config.seed));
        }
        // line search on the unknowns; fixed values are installed in full
        let mut lambda = T::one();
        let mut accepted = None;
        let base = gather(&state, &part.unknown)?;
        let mut trial = state.clone();
        if first {
            scatter(&mut trial, &part.initial, &gather(targets, &part.initial)?)?;
            scatter(&mut trial, &part.boundary, &gather(targets, &part.boundary)?)?;
        }
        for halving in 0..=config.max_halvings {
            let stepped: Vec<T> = base.iter().zip(&delta).map(|(u, d)| *u + lambda * *d).collect();
            scatter(&mut trial, &part.unknown, &stepped)?;
            if let Some((n, r)) = unknown_norm(problem, &trial, &part) {
                if n <= (T::one() - config.sufficient_decrease * lambda) * rhs_norm {
                    if halving > 0 {
                        report.line_search_activations += 1;
                    }
                    accepted = Some((n, r));
                    break;
                }
                if halving == config.max_halvings {
                    // no sufficient decrease: keep the shortest step
                    report.line_search_activations += 1;
                    warn!("line search exhausted at iteration {it}; taking step {lambda:e}");
                    accepted = Some((n, r));
                }
            }
            lambda *= config.backtrack;
        }
        let Some((n, r)) = accepted else {
            report.outcome = Outcome::Diverged { reason: format!("non-finite residual along the search direction at iteration {it}") };
            break;
        };
        state = trial;
        residual = r;
        report.iterations = it + 1;
        report.residual_history.push(f64_of(n));
        report.step_lengths.push(f64_of(lambda));
        debug!("level {} iteration {}: |R_U| = {:e} (step {:e})", grid.level, it + 1, n, lambda);
        if n < config.rel_tol * r0 || n <= config.abs_tol {
            report.outcome = Outcome::Converged;
            break;
        }
        if n > config.divergence_factor * r0 {
            report.outcome = Outcome::Diverged { reason: format!("residual grew beyond {:e} x |R_0|", f64_of(config.divergence_factor)) };
            break;
        }
    }
    report.wall_time_s = started.elapsed().as_secs_f64();
    info!(
        "level {}: {:?} after {} iterations, |R_0| = {:e}",
        grid.level, report.outcome, report.iterations, report.r0_norm
    );
    Ok((state, report))
}
