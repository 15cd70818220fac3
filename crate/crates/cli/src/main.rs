//! `stwave`: configuration-driven runs of the spacetime wavelet solver.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::error;

use stwave_cli::config::{self, ConfigError, RunConfig};
use stwave_cli::run::{self, CliError};

#[derive(Debug, Parser)]
#[command(name = "stwave", version, about = "Spacetime wavelet solver for Burgers and Sod problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML run configuration
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides `output.dir`)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for assembly
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for randomized diagnostics
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Finest level; the level span of the plan is kept
    #[arg(long, global = true)]
    level_override: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Recursive solve; writes field.csv, report.json and optionally sparsity.csv
    Solve,
    /// Error and rate table over the study levels
    Study,
    /// Final-time Sod profile against the inviscid Riemann solution
    Riemann,
    /// Tangent sparsity pattern at j_max
    Pattern,
}

fn load(cli: &Cli) -> Result<config::Resolved, CliError> {
    let path = cli.config.as_ref().ok_or_else(|| ConfigError::Field { field: "--config", reason: "a config file is required".into() })?;
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
    let mut cfg = RunConfig::parse(&text)?;
    if let Some(dir) = &cli.out {
        cfg.output.dir = Some(dir.clone());
    }
    if let Some(seed) = cli.seed {
        cfg.seed = Some(seed);
    }
    if let Some(j) = cli.level_override {
        apply_level_override(&mut cfg, j)?;
    }
    Ok(cfg.resolve()?)
}

/// Move the plan so it ends at `j`, keeping its span, and cut study levels
/// above `j`.
fn apply_level_override(cfg: &mut RunConfig, j: usize) -> Result<(), ConfigError> {
    let base = cfg.resolve()?;
    let span = base.plan.j_max - base.plan.j_start;
    if j <= span {
        return Err(ConfigError::Field {
            field: "--level-override",
            reason: format!("level {j} leaves no room for the {} planned levels", span + 1),
        });
    }
    cfg.levels.j_start = Some(j - span);
    cfg.levels.j_max = Some(j);
    if let Some(study) = &mut cfg.levels.study {
        study.retain(|&l| l <= j);
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = load(&cli).and_then(|resolved| {
        if let Some(n) = cli.threads {
            rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global().ok();
        }
        match cli.command {
            Command::Solve => run::solve(&resolved),
            Command::Study => run::study(&resolved),
            Command::Riemann => run::riemann(&resolved),
            Command::Pattern => run::pattern(&resolved),
        }
    });
    match result {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            error!("{e}");
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
