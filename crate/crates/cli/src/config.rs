//! Run configuration: a TOML file of flat keys grouped in typed sections.
//!
//! ```toml
//! problem = "sod"
//! seed = 0
//!
//! [domain]
//! x_lo = 0.0
//! x_hi = 1.0
//! t_end = 0.2
//!
//! [levels]
//! j_start = 2
//! j_max = 4
//! px = 6
//! pt = 6
//! guess = "prolongated"
//!
//! [schedule]
//! delta = [0.05, 0.03, 0.01]
//! chi = [1.0, 1.0, 1.0]
//! ```
//!
//! Every key is optional; missing values take the problem's defaults.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use stwave::newton::{GuessSource, NewtonConfig, RecursionPlan};
use stwave::problems::{BurgersSpec, ConditionSchedule, Primitive, SodSpec};
use stwave::assembly::Domain;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("cannot parse config: {0}")]
    Parse(String),
    #[error("invalid value for `{field}`: {reason}")]
    Field { field: &'static str, reason: String },
}

fn field(field: &'static str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Field { field, reason: reason.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemId {
    WalkingBurgers,
    MmsBurgers,
    SteepeningBurgers,
    Sod,
}

impl ProblemId {
    pub fn is_burgers(self) -> bool {
        !matches!(self, ProblemId::Sod)
    }

    pub fn name(self) -> &'static str {
        match self {
            ProblemId::WalkingBurgers => "walking_burgers",
            ProblemId::MmsBurgers => "mms_burgers",
            ProblemId::SteepeningBurgers => "steepening_burgers",
            ProblemId::Sod => "sod",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSection {
    pub x_lo: Option<f64>,
    pub x_hi: Option<f64>,
    pub t_end: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelsSection {
    pub j_start: Option<usize>,
    pub j_max: Option<usize>,
    pub px: Option<usize>,
    pub pt: Option<usize>,
    pub guess: Option<GuessSource>,
    /// detail-estimate tolerance at `j_max`
    pub error_tolerance: Option<f64>,
    pub max_restarts: Option<usize>,
    /// levels for `study`
    pub study: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSection {
    pub rho: Option<f64>,
    pub v: Option<f64>,
    pub p: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicsSection {
    pub nu: Option<f64>,
    pub c0: Option<f64>,
    pub tau: Option<f64>,
    /// shock centre
    pub x0: Option<f64>,
    pub delta: Option<f64>,
    pub gamma: Option<f64>,
    pub kappa: Option<f64>,
    pub cv: Option<f64>,
    pub mu: Option<f64>,
    pub left: Option<StateSection>,
    pub right: Option<StateSection>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleSection {
    pub delta: Option<Vec<f64>>,
    pub chi: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NewtonSection {
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub max_iterations: Option<usize>,
    pub backtrack: Option<f64>,
    pub sufficient_decrease: Option<f64>,
    pub max_halvings: Option<usize>,
    pub divergence_factor: Option<f64>,
    pub estimate_condition: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
    /// also write the tangent sparsity pattern on `solve`
    pub pattern: Option<bool>,
    /// full width of the masked windows in `riemann`
    pub window: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemId,
    pub seed: Option<u64>,
    #[serde(default)]
    pub domain: DomainSection,
    #[serde(default)]
    pub levels: LevelsSection,
    #[serde(default)]
    pub physics: PhysicsSection,
    #[serde(default)]
    pub schedule: ScheduleSection,
    #[serde(default)]
    pub newton: NewtonSection,
    #[serde(default)]
    pub output: OutputSection,
}

impl RunConfig {
    pub fn new(problem: ProblemId) -> Self {
        Self {
            problem,
            seed: None,
            domain: DomainSection::default(),
            levels: LevelsSection::default(),
            physics: PhysicsSection::default(),
            schedule: ScheduleSection::default(),
            newton: NewtonSection::default(),
            output: OutputSection::default(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config values are always representable")
    }
}

/// Fully defaulted and validated run parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub problem: ProblemId,
    pub domain: Domain<f64>,
    pub plan: RecursionPlan<f64>,
    pub newton: NewtonConfig<f64>,
    pub burgers: Option<BurgersSpec<f64>>,
    pub sod: Option<SodSpec<f64>>,
    pub study_levels: Vec<usize>,
    pub out_dir: PathBuf,
    pub pattern: bool,
    pub window: Option<f64>,
    pub seed: u64,
}

fn positive(name: &'static str, v: f64) -> Result<f64, ConfigError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(field(name, format!("must be positive and finite, got {v}")))
    }
}

fn finite(name: &'static str, v: f64) -> Result<f64, ConfigError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(field(name, format!("must be finite, got {v}")))
    }
}

fn order(name: &'static str, p: usize) -> Result<usize, ConfigError> {
    if matches!(p, 4 | 6 | 8) {
        Ok(p)
    } else {
        Err(field(name, format!("basis order must be 4, 6 or 8, got {p}")))
    }
}

fn state(name: &'static str, s: Option<StateSection>, default: Primitive<f64>) -> Result<Primitive<f64>, ConfigError> {
    let s = s.unwrap_or_default();
    let out = Primitive::new(s.rho.unwrap_or(default.rho), s.v.unwrap_or(default.v), s.p.unwrap_or(default.p));
    if !(out.rho > 0.0 && out.p > 0.0 && out.v.is_finite()) {
        return Err(field(name, "density and pressure must be positive"));
    }
    Ok(out)
}

impl RunConfig {
    /// Fill defaults and check every value before any work is done.
    pub fn resolve(&self) -> Result<Resolved, ConfigError> {
        let p = self.problem;
        let ph = &self.physics;
        let (x_lo, x_hi, t_end) = if p == ProblemId::Sod { (0.0, 1.0, 0.2) } else { (-1.0, 1.0, 0.5) };
        let (dpx, dpt) = match p {
            ProblemId::WalkingBurgers | ProblemId::SteepeningBurgers => (6, 4),
            _ => (6, 6),
        };
        let domain = Domain {
            x_lo: finite("domain.x_lo", self.domain.x_lo.unwrap_or(x_lo))?,
            x_hi: finite("domain.x_hi", self.domain.x_hi.unwrap_or(x_hi))?,
            t_end: positive("domain.t_end", self.domain.t_end.unwrap_or(t_end))?,
            px: order("levels.px", self.levels.px.unwrap_or(dpx))?,
            pt: order("levels.pt", self.levels.pt.unwrap_or(dpt))?,
        };
        if domain.x_hi <= domain.x_lo {
            return Err(field("domain.x_hi", "must exceed domain.x_lo"));
        }
        let lv = &self.levels;
        let j_max = lv.j_max.or(lv.j_start).unwrap_or(3);
        let j_start = lv.j_start.unwrap_or(if p == ProblemId::Sod { j_max.saturating_sub(2).max(1) } else { j_max });
        if j_start == 0 {
            return Err(field("levels.j_start", "must be at least 1"));
        }
        if j_max < j_start {
            return Err(field("levels.j_max", format!("must be >= j_start = {j_start}, got {j_max}")));
        }
        if j_max > 12 {
            return Err(field("levels.j_max", format!("level {j_max} exceeds the supported maximum 12")));
        }
        let m = j_max - j_start + 1;

        let mut burgers = None;
        let mut sod = None;
        let delta = positive("physics.delta", ph.delta.unwrap_or(0.01))?;
        match p {
            ProblemId::Sod => {
                let d = SodSpec::<f64>::default();
                let spec = SodSpec {
                    gamma: ph.gamma.unwrap_or(d.gamma),
                    kappa: ph.kappa.unwrap_or(d.kappa),
                    cv: ph.cv.unwrap_or(d.cv),
                    mu: ph.mu.unwrap_or(d.mu),
                    delta,
                    x0: finite("physics.x0", ph.x0.unwrap_or(d.x0))?,
                    left: state("physics.left", ph.left, d.left)?,
                    right: state("physics.right", ph.right, d.right)?,
                };
                if spec.gamma.is_nan() || spec.gamma <= 1.0 {
                    return Err(field("physics.gamma", format!("must exceed 1, got {}", spec.gamma)));
                }
                positive("physics.kappa", spec.kappa)?;
                positive("physics.cv", spec.cv)?;
                positive("physics.mu", spec.mu)?;
                sod = Some(spec);
            }
            _ => {
                let nu = positive("physics.nu", ph.nu.unwrap_or(0.01))?;
                let spec = match p {
                    ProblemId::WalkingBurgers => BurgersSpec::walking(
                        nu,
                        finite("physics.c0", ph.c0.unwrap_or(1.0))?,
                        finite("physics.x0", ph.x0.unwrap_or(-0.5))?,
                    ),
                    ProblemId::MmsBurgers => BurgersSpec::manufactured(
                        nu,
                        positive("physics.tau", ph.tau.unwrap_or(1e-2))?,
                        finite("physics.x0", ph.x0.unwrap_or(-0.5))?,
                    ),
                    _ => BurgersSpec::steepening(nu),
                };
                burgers = Some(spec);
            }
        }

        let schedule = {
            let deltas = match &self.schedule.delta {
                Some(v) => v.clone(),
                None if p == ProblemId::Sod => {
                    // steepen by odd multiples toward the target delta
                    (0..m).map(|g| delta * (2 * (m - 1 - g) + 1) as f64).collect()
                }
                None => vec![delta; m],
            };
            let chi = self.schedule.chi.clone().unwrap_or_else(|| vec![1.0; deltas.len()]);
            if deltas.len() != m {
                return Err(field(
                    "schedule.delta",
                    format!("length {} does not match the {m} levels {j_start}..={j_max}", deltas.len()),
                ));
            }
            if chi.len() != m {
                return Err(field("schedule.chi", format!("length {} does not match the {m} levels", chi.len())));
            }
            if let Some(bad) = deltas.iter().find(|d| !(**d > 0.0 && d.is_finite())) {
                return Err(field("schedule.delta", format!("entries must be positive, got {bad}")));
            }
            if let Some(bad) = chi.iter().find(|c| !(0.0..=1.0).contains(*c)) {
                return Err(field("schedule.chi", format!("entries must lie in [0, 1], got {bad}")));
            }
            ConditionSchedule { delta: deltas, chi }
        };
        let default_guess = if p == ProblemId::Sod { GuessSource::Prolongated } else { GuessSource::Zeros };
        let error_tolerance = match lv.error_tolerance {
            Some(t) => Some(positive("levels.error_tolerance", t)?),
            None => None,
        };
        let plan = RecursionPlan {
            j_start,
            j_max,
            schedule,
            guess: lv.guess.unwrap_or(default_guess),
            error_tolerance,
            max_restarts: lv.max_restarts.unwrap_or(0),
        };

        let nw = &self.newton;
        let d = NewtonConfig::<f64>::default();
        let newton = NewtonConfig {
            rel_tol: positive("newton.rel_tol", nw.rel_tol.unwrap_or(d.rel_tol))?,
            abs_tol: nw.abs_tol.unwrap_or(d.abs_tol),
            max_iterations: nw.max_iterations.unwrap_or(d.max_iterations),
            backtrack: nw.backtrack.unwrap_or(d.backtrack),
            sufficient_decrease: nw.sufficient_decrease.unwrap_or(d.sufficient_decrease),
            max_halvings: nw.max_halvings.unwrap_or(d.max_halvings),
            divergence_factor: positive("newton.divergence_factor", nw.divergence_factor.unwrap_or(d.divergence_factor))?,
            estimate_condition: nw.estimate_condition.unwrap_or(d.estimate_condition),
            seed: self.seed,
        };
        if !(newton.abs_tol >= 0.0 && newton.abs_tol.is_finite()) {
            return Err(field("newton.abs_tol", format!("must be non-negative and finite, got {}", newton.abs_tol)));
        }
        if newton.max_iterations == 0 {
            return Err(field("newton.max_iterations", "must be at least 1"));
        }
        if !(newton.backtrack > 0.0 && newton.backtrack < 1.0) {
            return Err(field("newton.backtrack", format!("must lie in (0, 1), got {}", newton.backtrack)));
        }
        if !(0.0..1.0).contains(&newton.sufficient_decrease) {
            return Err(field("newton.sufficient_decrease", "must lie in [0, 1)"));
        }

        let study_levels = lv.study.clone().unwrap_or_else(|| (j_start..=j_max).collect());
        if study_levels.is_empty() || study_levels.windows(2).any(|w| w[1] <= w[0]) {
            return Err(field("levels.study", "must be a non-empty increasing list"));
        }
        if study_levels[0] == 0 {
            return Err(field("levels.study", "levels start at 1"));
        }
        let window = match self.output.window {
            Some(w) => Some(positive("output.window", w)?),
            None => None,
        };
        Ok(Resolved {
            problem: p,
            domain,
            plan,
            newton,
            burgers,
            sod,
            study_levels,
            out_dir: self.output.dir.clone().unwrap_or_else(|| PathBuf::from("out")),
            pattern: self.output.pattern.unwrap_or(false),
            window,
            seed: self.seed.unwrap_or(0),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_resolve_for_every_problem() {
        for p in [ProblemId::WalkingBurgers, ProblemId::MmsBurgers, ProblemId::SteepeningBurgers, ProblemId::Sod] {
            let r = RunConfig::new(p).resolve().unwrap();
            assert_eq!(r.plan.schedule.len(), r.plan.j_max - r.plan.j_start + 1);
        }
        let sod = RunConfig::new(ProblemId::Sod).resolve().unwrap();
        assert_eq!(sod.plan.schedule.delta, vec![0.05, 0.03, 0.01]);
    }

    #[test]
    fn bad_order_names_field() {
        let c = RunConfig::parse("problem = \"walking_burgers\"\n[levels]\npx = 5\n").unwrap();
        match c.resolve() {
            Err(ConfigError::Field { field, .. }) => assert_eq!(field, "levels.px"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(RunConfig::parse("problem = \"sod\"\n[levels]\nj_top = 3\n").is_err());
        assert!(RunConfig::parse("problem = \"heat\"\n").is_err());
    }
}
