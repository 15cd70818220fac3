//! Convergence studies against exact Burgers solutions and comparison of
//! viscous Sod solutions with the inviscid Riemann solution.

use std::io::Write;

use serde::Serialize;

use crate::assembly::{apply_t, apply_x, BurgersSetup, Discrete, LevelFactory, Operators};
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::newton::{field_estimates, recursive_solve, NewtonConfig, Outcome, RecursionPlan, SolveReport};
use crate::problems::{ConditionSchedule, SodSpec};
use crate::scalar::Real;

/// Max-norm errors of one level. Derivative errors are absent when the
/// problem has no closed-form derivatives.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyRow {
    pub level: usize,
    pub dof: usize,
    pub err_f: f64,
    pub err_ft: Option<f64>,
    pub err_fx: Option<f64>,
    pub err_fxx: Option<f64>,
}

impl StudyRow {
    fn errors(&self) -> [Option<f64>; 4] {
        [Some(self.err_f), self.err_ft, self.err_fx, self.err_fxx]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceTable {
    pub rows: Vec<StudyRow>,
    pub reports: Vec<SolveReport>,
}

fn pair_rate(a: &StudyRow, b: &StudyRow, ea: Option<f64>, eb: Option<f64>) -> Option<f64> {
    let (ea, eb) = (ea?, eb?);
    if !(ea > 0.0 && eb > 0.0) || b.level <= a.level {
        return None;
    }
    Some((ea / eb).log2() / (b.level - a.level) as f64)
}

impl ConvergenceTable {
    /// `log2` rates between consecutive rows for f, f_t, f_x, f_xx.
    pub fn rates(&self) -> Vec<[Option<f64>; 4]> {
        self.rows
            .windows(2)
            .map(|w| {
                let (ea, eb) = (w[0].errors(), w[1].errors());
                std::array::from_fn(|k| pair_rate(&w[0], &w[1], ea[k], eb[k]))
            })
            .collect()
    }

    /// Least-squares slope of `-log2(err)` against level, per quantity.
    pub fn fitted_rates(&self) -> [Option<f64>; 4] {
        std::array::from_fn(|k| {
            let pts: Vec<(f64, f64)> = self
                .rows
                .iter()
                .filter_map(|r| r.errors()[k].filter(|e| *e > 0.0).map(|e| (r.level as f64, -e.log2())))
                .collect();
            fitted_slope(&pts)
        })
    }

    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "level,dof,err_f,err_ft,err_fx,err_fxx,rate_f,rate_ft,rate_fx,rate_fxx")?;
        let rates = self.rates();
        let cell = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
        for (i, r) in self.rows.iter().enumerate() {
            // rates sit on the finer level of each pair
            let rate = if i == 0 { [None; 4] } else { rates[i - 1] };
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                r.level,
                r.dof,
                r.err_f,
                cell(r.err_ft),
                cell(r.err_fx),
                cell(r.err_fxx),
                cell(rate[0]),
                cell(rate[1]),
                cell(rate[2]),
                cell(rate[3])
            )?;
        }
        Ok(())
    }
}

/// Slope of the least-squares line through `pts`; `None` below two points.
pub fn fitted_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn max_diff<T: Real>(a: &[T], b: &[T]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (p, q)| m.max((*p - *q).abs().to_f64().unwrap_or(f64::NAN)))
}

/// Errors of a Burgers solution on `grid` against the exact solution.
pub fn solution_errors<T: Real>(setup: &BurgersSetup<T>, grid: &GridSpec<T>, state: &[T]) -> Result<StudyRow> {
    let spec = &setup.spec;
    let n = grid.nodes();
    if state.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: state.len() });
    }
    let mut exact = vec![T::zero(); n];
    let mut dt = vec![T::zero(); n];
    let mut dx = vec![T::zero(); n];
    let mut dxx = vec![T::zero(); n];
    let closed = spec.has_closed_form();
    for i in 0..n {
        let (kx, kt) = grid.unflat(i);
        let (x, t) = (grid.x(kx), grid.t(kt));
        match spec.exact_point(x, t) {
            Some(p) => {
                exact[i] = p.f;
                dt[i] = p.ft;
                dx[i] = p.fx;
                dxx[i] = p.fxx;
            }
            None => exact[i] = spec.exact(x, t)?,
        }
    }
    let mut row = StudyRow {
        level: grid.level,
        dof: n,
        err_f: max_diff(state, &exact),
        err_ft: None,
        err_fx: None,
        err_fxx: None,
    };
    if closed {
        let ops = Operators::new(grid)?;
        let mut buf = vec![T::zero(); n];
        apply_t(&ops.dt, grid.nx, state, &mut buf);
        row.err_ft = Some(max_diff(&buf, &dt));
        apply_x(&ops.dx, grid.nx, state, &mut buf);
        row.err_fx = Some(max_diff(&buf, &dx));
        apply_x(&ops.dxx, grid.nx, state, &mut buf);
        row.err_fxx = Some(max_diff(&buf, &dxx));
    }
    Ok(row)
}

/// Direct zero-guess solve at each level with the exact conditions,
/// tabulating solution and derivative errors.
pub fn convergence_study<T: Real>(
    setup: &BurgersSetup<T>,
    levels: &[usize],
    config: &NewtonConfig<T>,
) -> Result<ConvergenceTable> {
    if levels.is_empty() {
        return Err(Error::InvalidParameter("convergence study needs at least one level".into()));
    }
    if levels.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("study levels must be strictly increasing".into()));
    }
    let mut table = ConvergenceTable { rows: Vec::new(), reports: Vec::new() };
    for &j in levels {
        let plan = RecursionPlan::single(j, ConditionSchedule::single(T::one()));
        let out = recursive_solve(setup, &plan, config)?;
        if let Outcome::Diverged { reason } = &out.report.outcome {
            return Err(Error::Diverged { level: j, reason: reason.clone() });
        }
        let level = setup.at_level(j)?;
        table.rows.push(solution_errors(setup, level.grid(), &out.state)?);
        table.reports.push(out.report);
    }
    Ok(table)
}

/// Paired viscous and inviscid profiles at the final time.
#[derive(Debug, Clone, Serialize)]
pub struct RiemannComparison {
    pub x: Vec<f64>,
    /// `[rho, v, e]` from the spacetime solve
    pub viscous: [Vec<f64>; 3],
    pub inviscid: [Vec<f64>; 3],
    /// full width of each excluded window
    pub window: f64,
    /// wave edges at the final time
    pub edges: Vec<f64>,
    /// max difference over unmasked nodes, relative to the max of the
    /// inviscid field
    pub masked_difference: [f64; 3],
    pub unmasked_nodes: usize,
    pub error_estimates: Vec<f64>,
}

impl RiemannComparison {
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "x,rho,rho_exact,v,v_exact,e,e_exact,masked")?;
        for (i, x) in self.x.iter().enumerate() {
            let masked = self.edges.iter().any(|e| (x - e).abs() < 0.5 * self.window);
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                x,
                self.viscous[0][i],
                self.inviscid[0][i],
                self.viscous[1][i],
                self.inviscid[1][i],
                self.viscous[2][i],
                self.inviscid[2][i],
                u8::from(masked)
            )?;
        }
        Ok(())
    }
}

/// Compare the final time slice of a Sod state with the Riemann solution.
/// `window` defaults to `5 delta + 10 dx`.
pub fn compare_riemann<T: Real>(
    spec: &SodSpec<T>,
    grid: &GridSpec<T>,
    state: &[T],
    window: Option<T>,
) -> Result<RiemannComparison> {
    let n = grid.nodes();
    if state.len() != 3 * n {
        return Err(Error::DimensionMismatch { expected: 3 * n, got: state.len() });
    }
    let exact = spec.riemann()?;
    let t_end = grid.t_end;
    let w = window.unwrap_or(T::lit(5.0) * spec.delta + T::lit(10.0) * grid.dx);
    let uniform = spec.left == spec.right;
    let edges: Vec<f64> = if uniform {
        Vec::new()
    } else {
        exact.wave_speeds().iter().map(|s| (spec.x0 + *s * t_end).to_f64().unwrap_or(f64::NAN)).collect()
    };
    let f = |v: T| v.to_f64().unwrap_or(f64::NAN);
    let kt = grid.nt - 1;
    let mut cmp = RiemannComparison {
        x: Vec::with_capacity(grid.nx),
        viscous: Default::default(),
        inviscid: Default::default(),
        window: f(w),
        edges,
        masked_difference: [0.0; 3],
        unmasked_nodes: 0,
        error_estimates: field_estimates(state, 3, grid.level, grid.px, grid.pt)?,
    };
    for kx in 0..grid.nx {
        let x = grid.x(kx);
        let i = grid.flat(kx, kt);
        let p = exact.sample(x, t_end);
        let ex = [p.rho, p.v, spec.energy(p.rho, p.p)];
        cmp.x.push(f(x));
        for k in 0..3 {
            cmp.viscous[k].push(f(state[k * n + i]));
            cmp.inviscid[k].push(f(ex[k]));
        }
    }
    let mut diff = [0.0f64; 3];
    for (i, x) in cmp.x.iter().enumerate() {
        if cmp.edges.iter().any(|e| (x - e).abs() < 0.5 * cmp.window) {
            continue;
        }
        cmp.unmasked_nodes += 1;
        for k in 0..3 {
            diff[k] = diff[k].max((cmp.viscous[k][i] - cmp.inviscid[k][i]).abs());
        }
    }
    for k in 0..3 {
        let scale = cmp.inviscid[k].iter().fold(0.0f64, |m, v| m.max(v.abs()));
        cmp.masked_difference[k] = if scale > 0.0 { diff[k] / scale } else { diff[k] };
    }
    Ok(cmp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_exact_line() {
        let pts = [(3.0, 1.0), (4.0, 5.0), (5.0, 9.0)];
        assert!((fitted_slope(&pts).unwrap() - 4.0).abs() < 1e-12);
        assert_eq!(fitted_slope(&pts[..1]), None);
    }

    #[test]
    fn single_row_has_empty_rates() {
        let t = ConvergenceTable {
            rows: vec![StudyRow { level: 3, dof: 10, err_f: 0.1, err_ft: None, err_fx: None, err_fxx: None }],
            reports: Vec::new(),
        };
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().nth(1).unwrap(), "3,10,0.1,,,,,,,");
    }
}
