//! Discrete residuals, structured sparse tangents and the reduction to the
//! unknown-only system.
//!
//! Kronecker factors are never formed. Each residual row is a short list of
//! pointwise factors times 1D stencil rows; the tangent pattern is the union
//! of those stencil supports and is computed once per grid.

mod burgers;
mod setup;
mod sod;

pub use burgers::BurgersDiscrete;
pub use setup::{BurgersSetup, Domain, LevelFactory, SodSetup};
pub use sod::{SodDiscrete, SOD_FIELDS};

use rayon::prelude::*;

use crate::derivative::{DerivativeOperator, Direction};
use crate::error::{Error, Result};
use crate::grid::{DofKind, DofPartition, GridSpec};
use crate::scalar::{max_abs, norm2, Real};
use crate::sparse::{BlockLayout, SparseTangent};
use crate::wavelet::FieldGrid2D;

/// The three 1D operators every problem here needs.
#[derive(Debug, Clone)]
pub struct Operators<T> {
    pub dx: DerivativeOperator<T>,
    pub dxx: DerivativeOperator<T>,
    pub dt: DerivativeOperator<T>,
}

impl<T: Real> Operators<T> {
    pub fn new(grid: &GridSpec<T>) -> Result<Self> {
        Ok(Self {
            dx: grid.operator(1, Direction::X)?,
            dxx: grid.operator(2, Direction::X)?,
            dt: grid.operator(1, Direction::T)?,
        })
    }

    pub fn matches(&self, grid: &GridSpec<T>) -> bool {
        self.dx.n() == grid.nx && self.dxx.n() == grid.nx && self.dt.n() == grid.nt
    }
}

/// `out = D_x f` for a column-stacked single field.
pub fn apply_x<T: Real>(op: &DerivativeOperator<T>, nx: usize, src: &[T], out: &mut [T]) {
    for (s, o) in src.chunks_exact(nx).zip(out.chunks_exact_mut(nx)) {
        op.apply_line(s, o);
    }
}

/// `out = D_t f` for a column-stacked single field.
pub fn apply_t<T: Real>(op: &DerivativeOperator<T>, nx: usize, src: &[T], out: &mut [T]) {
    let nt = src.len() / nx;
    for kt in 0..nt {
        let (start, w) = op.row(kt);
        let dst = &mut out[kt * nx..(kt + 1) * nx];
        dst.iter_mut().for_each(|v| *v = T::zero());
        for (m, &wm) in w.iter().enumerate() {
            let line = &src[(start + m) * nx..(start + m + 1) * nx];
            for (d, s) in dst.iter_mut().zip(line) {
                *d += wm * *s;
            }
        }
    }
}

/// Residual values in global layout with cached norms.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualSet<T> {
    pub values: Vec<T>,
    pub fields: usize,
    pub norm_inf: T,
    pub norm_2: T,
    level: usize,
    px: usize,
    pt: usize,
}

impl<T: Real> ResidualSet<T> {
    pub fn new(values: Vec<T>, fields: usize, grid: &GridSpec<T>) -> Self {
        Self {
            norm_inf: max_abs(&values),
            norm_2: norm2(&values),
            values,
            fields,
            level: grid.level,
            px: grid.px,
            pt: grid.pt,
        }
    }

    pub fn field(&self, i: usize) -> FieldGrid2D<T> {
        let n = self.values.len() / self.fields;
        FieldGrid2D::from_values(self.level, self.px, self.pt, self.values[i * n..(i + 1) * n].to_vec())
            .expect("residual layout matches grid")
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

/// A discretized problem: residual and tangent rows over the full state.
pub trait Discrete<T: Real>: Sync {
    fn fields(&self) -> usize;
    fn grid(&self) -> &GridSpec<T>;
    fn names(&self) -> &'static [&'static str];

    /// Pointwise data derived from a state, shared by residual and tangent.
    type Cache: Sync;
    fn cache(&self, state: &[T]) -> Result<Self::Cache>;
    fn residual_from(&self, cache: &Self::Cache) -> Vec<T>;
    /// Emit `(column, value)` contributions of one tangent row.
    fn row_terms(&self, cache: &Self::Cache, row: usize, emit: &mut dyn FnMut(usize, T));

    /// Target values on initial and boundary nodes for schedule weights
    /// `(delta, chi)`; entries at unknowns are left zero.
    fn targets(&self, delta: T, chi: T) -> Result<Vec<T>>;

    fn dofs(&self) -> usize {
        self.fields() * self.grid().nodes()
    }

    fn check_state(&self, state: &[T]) -> Result<()> {
        if state.len() != self.dofs() {
            return Err(Error::DimensionMismatch { expected: self.dofs(), got: state.len() });
        }
        Ok(())
    }

    fn residual(&self, state: &[T]) -> Result<ResidualSet<T>> {
        let cache = self.cache(state)?;
        let r = ResidualSet::new(self.residual_from(&cache), self.fields(), self.grid());
        if !r.is_finite() {
            return Err(Error::NonFinite("residual"));
        }
        Ok(r)
    }

    /// Tangent structure: union of every term's stencil support.
    fn pattern(&self) -> Result<SparseTangent<T>> {
        let n = self.dofs();
        let cache = self.cache(&vec![T::one(); n])?;
        let rows: Vec<Vec<usize>> = (0..n)
            .into_par_iter()
            .map(|r| {
                let mut cols = Vec::new();
                self.row_terms(&cache, r, &mut |c, _| cols.push(c));
                cols.sort_unstable();
                cols.dedup();
                cols
            })
            .collect();
        let mut row_ptr = Vec::with_capacity(n + 1);
        row_ptr.push(0);
        let mut col_idx = Vec::with_capacity(rows.iter().map(Vec::len).sum());
        for cols in rows {
            col_idx.extend(cols);
            row_ptr.push(col_idx.len());
        }
        let k = SparseTangent::from_pattern(n, n, row_ptr, col_idx)?;
        if self.fields() > 1 {
            k.with_blocks(BlockLayout { fields: self.fields(), block_size: self.grid().nodes() })
        } else {
            Ok(k)
        }
    }

    /// Fill `k` (built by [`Discrete::pattern`]) with the exact tangent.
    fn fill_tangent(&self, state: &[T], k: &mut SparseTangent<T>) -> Result<()> {
        self.check_state(state)?;
        if k.n_rows() != self.dofs() {
            return Err(Error::DimensionMismatch { expected: self.dofs(), got: k.n_rows() });
        }
        let cache = self.cache(state)?;
        let n = k.n_rows();
        let ptr = k.row_ptr().to_vec();
        let cols = k.col_idx().to_vec();
        let mut slices: Vec<&mut [T]> = Vec::with_capacity(n);
        let mut rest = k.values_mut();
        for r in 0..n {
            let (head, tail) = rest.split_at_mut(ptr[r + 1] - ptr[r]);
            slices.push(head);
            rest = tail;
        }
        let missing = slices
            .into_par_iter()
            .enumerate()
            .map(|(r, vals)| {
                vals.iter_mut().for_each(|v| *v = T::zero());
                let rc = &cols[ptr[r]..ptr[r + 1]];
                let mut bad = false;
                self.row_terms(&cache, r, &mut |c, v| match rc.binary_search(&c) {
                    Ok(i) => vals[i] += v,
                    Err(_) => bad = true,
                });
                bad
            })
            .reduce(|| false, |a, b| a || b);
        if missing {
            return Err(Error::InvalidParameter("tangent term outside the precomputed pattern".into()));
        }
        if !k.is_finite() {
            return Err(Error::NonFinite("tangent"));
        }
        Ok(())
    }

    fn tangent(&self, state: &[T]) -> Result<SparseTangent<T>> {
        let mut k = self.pattern()?;
        self.fill_tangent(state, &mut k)?;
        Ok(k)
    }
}

/// `K_UU` and right-hand side of the unknown-only Newton system. The
/// initial and boundary forcing `K_UI dF_I + K_UB dF_B` enters only when
/// `first_iteration` is set.
pub fn reduce_to_u<T: Real>(
    k: &SparseTangent<T>,
    r: &[T],
    partition: &DofPartition,
    df_i: &[T],
    df_b: &[T],
    first_iteration: bool,
) -> Result<(SparseTangent<T>, Vec<T>)> {
    if partition.unknown.is_empty() {
        return Err(Error::EmptyUnknowns);
    }
    if k.n_rows() != partition.total() || r.len() != partition.total() {
        return Err(Error::DimensionMismatch { expected: partition.total(), got: k.n_rows() });
    }
    if df_i.len() != partition.initial.len() {
        return Err(Error::DimensionMismatch { expected: partition.initial.len(), got: df_i.len() });
    }
    if df_b.len() != partition.boundary.len() {
        return Err(Error::DimensionMismatch { expected: partition.boundary.len(), got: df_b.len() });
    }
    let kuu = k.submatrix(&partition.unknown, &partition.unknown)?;
    let rhs = partition
        .unknown
        .iter()
        .map(|&row| {
            let mut v = -r[row];
            if first_iteration {
                let (cols, vals) = k.row(row);
                for (&c, &a) in cols.iter().zip(vals) {
                    match partition.kind(c) {
                        DofKind::Initial => v -= a * df_i[partition.position(c)],
                        DofKind::Boundary => v -= a * df_b[partition.position(c)],
                        DofKind::Unknown => {}
                    }
                }
            }
            v
        })
        .collect();
    Ok((kuu, rhs))
}
