//! Subcommand implementations and artifact writers.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use log::{info, warn};
use serde::Serialize;
use stwave::assembly::{BurgersSetup, Discrete, LevelFactory, SodSetup};
use stwave::grid::GridSpec;
use stwave::newton::{recursive_solve, Outcome, RecursiveOutcome, SolveReport};
use stwave::sparse::SparseTangent;
use stwave::study::{compare_riemann, convergence_study};
use thiserror::Error;

use crate::config::{ConfigError, ProblemId, Resolved};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Diverged(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Solver(stwave::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Diverged(_) | CliError::Solver(_) => 3,
            CliError::Io { .. } => 4,
        }
    }
}

impl From<stwave::Error> for CliError {
    fn from(e: stwave::Error) -> Self {
        use stwave::Error as E;
        match e {
            E::Diverged { .. } => CliError::Diverged(e.to_string()),
            E::InvalidParameter(_) | E::UnsupportedOrder(_) | E::UnsupportedDerivative { .. } | E::DegenerateDomain(_) => {
                CliError::Config(ConfigError::Field { field: "config", reason: e.to_string() })
            }
            other => CliError::Solver(other),
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

/// Create `name` inside `dir` and hand a buffered writer to `body`.
fn write_file(
    dir: &Path,
    name: &str,
    body: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    let file = File::create(&path).map_err(io_err(&path))?;
    let mut w = BufWriter::new(file);
    body(&mut w).and_then(|_| w.flush()).map_err(io_err(&path))?;
    Ok(path)
}

fn write_json(dir: &Path, name: &str, value: &impl Serialize) -> Result<PathBuf, CliError> {
    let text = serde_json::to_string_pretty(value).expect("artifacts serialize");
    write_file(dir, name, |w| writeln!(w, "{text}"))
}

/// Column-stacked fields as `x,t,<names>` rows.
pub fn write_fields(out: &mut impl Write, grid: &GridSpec<f64>, names: &[&str], state: &[f64]) -> std::io::Result<()> {
    writeln!(out, "x,t,{}", names.join(","))?;
    let n = grid.nodes();
    for i in 0..n {
        let (kx, kt) = grid.unflat(i);
        write!(out, "{},{}", grid.x(kx), grid.t(kt))?;
        for f in 0..names.len() {
            write!(out, ",{}", state[f * n + i])?;
        }
        writeln!(out)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct Timings {
    levels: Vec<(usize, f64)>,
}

fn timings(report: &SolveReport) -> Timings {
    Timings { levels: report.levels.iter().map(|l| (l.level, l.wall_time_s)).collect() }
}

fn prepare(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(io_err(dir))
}

fn burgers_setup(r: &Resolved) -> BurgersSetup<f64> {
    BurgersSetup { spec: r.burgers.expect("burgers problem"), domain: r.domain }
}

fn sod_setup(r: &Resolved) -> SodSetup<f64> {
    SodSetup { spec: r.sod.expect("sod problem"), domain: r.domain }
}

struct Solved {
    outcome: RecursiveOutcome<f64>,
    grid: GridSpec<f64>,
    names: &'static [&'static str],
}

fn solve_with<F: LevelFactory<f64>>(factory: &F, r: &Resolved) -> Result<Solved, CliError> {
    let mut outcome = recursive_solve(factory, &r.plan, &r.newton)?;
    outcome.report.problem = r.problem.name().into();
    let level = factory.at_level(outcome.level)?;
    Ok(Solved { grid: level.grid().clone(), names: level.names(), outcome })
}

fn run_solve(r: &Resolved) -> Result<Solved, CliError> {
    if r.problem.is_burgers() {
        solve_with(&burgers_setup(r), r)
    } else {
        solve_with(&sod_setup(r), r)
    }
}

fn finish(report: &SolveReport) -> Result<(), CliError> {
    match &report.outcome {
        Outcome::Diverged { reason } => {
            let level = report.levels.last().map_or(0, |l| l.level);
            Err(CliError::Diverged(format!("Newton iteration diverged at level {level}: {reason}")))
        }
        Outcome::IncreaseJmax { estimate, tolerance } => {
            warn!("error estimate {estimate:e} above tolerance {tolerance:e}; increase j_max");
            Ok(())
        }
        _ => Ok(()),
    }
}

pub fn solve(r: &Resolved) -> Result<Vec<PathBuf>, CliError> {
    prepare(&r.out_dir)?;
    let s = run_solve(r)?;
    let report = &s.outcome.report;
    let mut written = vec![
        write_file(&r.out_dir, "field.csv", |w| write_fields(w, &s.grid, s.names, &s.outcome.state))?,
        write_json(&r.out_dir, "report.json", &report.without_timings())?,
        write_json(&r.out_dir, "timings.json", &timings(report))?,
    ];
    if r.pattern {
        written.push(pattern_file(r, s.outcome.level)?);
    }
    info!("{} Newton iterations over {} levels", report.total_iterations(), report.levels.len());
    finish(report)?;
    Ok(written)
}

pub fn study(r: &Resolved) -> Result<Vec<PathBuf>, CliError> {
    if !r.problem.is_burgers() {
        return Err(ConfigError::Field { field: "problem", reason: "study needs a problem with an exact solution".into() }.into());
    }
    prepare(&r.out_dir)?;
    let table = convergence_study(&burgers_setup(r), &r.study_levels, &r.newton)?;
    let reports: Vec<SolveReport> = table
        .reports
        .iter()
        .map(|rep| {
            let mut rep = rep.without_timings();
            rep.problem = r.problem.name().into();
            rep
        })
        .collect();
    Ok(vec![
        write_file(&r.out_dir, "study.csv", |w| table.write_csv(w))?,
        write_json(&r.out_dir, "study.json", &reports)?,
    ])
}

#[derive(Serialize)]
struct RiemannReport<'a> {
    masked_difference: [f64; 3],
    window: f64,
    edges: &'a [f64],
    unmasked_nodes: usize,
    error_estimates: &'a [f64],
    solve: SolveReport,
}

pub fn riemann(r: &Resolved) -> Result<Vec<PathBuf>, CliError> {
    if r.problem != ProblemId::Sod {
        return Err(ConfigError::Field { field: "problem", reason: "riemann comparison needs the sod problem".into() }.into());
    }
    prepare(&r.out_dir)?;
    let s = run_solve(r)?;
    finish(&s.outcome.report)?;
    let spec = r.sod.expect("sod problem");
    let cmp = compare_riemann(&spec, &s.grid, &s.outcome.state, r.window)?;
    let rep = RiemannReport {
        masked_difference: cmp.masked_difference,
        window: cmp.window,
        edges: &cmp.edges,
        unmasked_nodes: cmp.unmasked_nodes,
        error_estimates: &cmp.error_estimates,
        solve: s.outcome.report.without_timings(),
    };
    Ok(vec![
        write_file(&r.out_dir, "riemann.csv", |w| cmp.write_csv(w))?,
        write_json(&r.out_dir, "riemann.json", &rep)?,
    ])
}

#[derive(Serialize)]
struct PatternSummary {
    level: usize,
    rows: usize,
    nnz: usize,
    bandwidth: usize,
    block_nnz: Option<Vec<usize>>,
}

fn tangent_pattern(r: &Resolved, level: usize) -> Result<SparseTangent<f64>, CliError> {
    Ok(if r.problem.is_burgers() {
        burgers_setup(r).at_level(level)?.pattern()?
    } else {
        sod_setup(r).at_level(level)?.pattern()?
    })
}

fn pattern_file(r: &Resolved, level: usize) -> Result<PathBuf, CliError> {
    let k = tangent_pattern(r, level)?;
    write_file(&r.out_dir, "sparsity.csv", |w| k.write_pattern(w))
}

pub fn pattern(r: &Resolved) -> Result<Vec<PathBuf>, CliError> {
    prepare(&r.out_dir)?;
    let level = r.plan.j_max;
    let k = tangent_pattern(r, level)?;
    let summary =
        PatternSummary { level, rows: k.n_rows(), nnz: k.nnz(), bandwidth: k.bandwidth(), block_nnz: k.block_nnz() };
    Ok(vec![
        write_file(&r.out_dir, "sparsity.csv", |w| k.write_pattern(w))?,
        write_json(&r.out_dir, "pattern.json", &summary)?,
    ])
}
