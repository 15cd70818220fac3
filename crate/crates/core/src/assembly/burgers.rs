use super::{apply_t, apply_x, Discrete, Operators};
use crate::error::{Error, Result};
use crate::grid::{DofKind, GridSpec};
use crate::grid::node_kind;
use crate::problems::BurgersSpec;
use crate::scalar::Real;

/// Burgers residual `R = f_t + (f + c) f_x - nu f_xx - g` on one grid.
#[derive(Debug, Clone)]
pub struct BurgersDiscrete<T> {
    pub spec: BurgersSpec<T>,
    pub grid: GridSpec<T>,
    pub ops: Operators<T>,
    /// `c(t_n)` per time index
    advection: Vec<T>,
    forcing: Vec<T>,
}

pub struct BurgersCache<T> {
    f: Vec<T>,
    ft: Vec<T>,
    fx: Vec<T>,
    fxx: Vec<T>,
}

impl<T: Real> BurgersDiscrete<T> {
    pub fn new(spec: BurgersSpec<T>, grid: GridSpec<T>) -> Result<Self> {
        spec.validate()?;
        let ops = Operators::new(&grid)?;
        Self::with_operators(spec, grid, ops)
    }

    pub fn with_operators(spec: BurgersSpec<T>, grid: GridSpec<T>, ops: Operators<T>) -> Result<Self> {
        if !ops.matches(&grid) {
            return Err(Error::DimensionMismatch { expected: grid.nx, got: ops.dx.n() });
        }
        let advection = (0..grid.nt).map(|kt| spec.c(grid.t(kt))).collect();
        let mut forcing = vec![T::zero(); grid.nodes()];
        for kt in 0..grid.nt {
            for kx in 0..grid.nx {
                forcing[grid.flat(kx, kt)] = spec.forcing(grid.x(kx), grid.t(kt));
            }
        }
        Ok(Self { spec, grid, ops, advection, forcing })
    }
}

impl<T: Real> Discrete<T> for BurgersDiscrete<T> {
    type Cache = BurgersCache<T>;

    fn fields(&self) -> usize {
        1
    }

    fn grid(&self) -> &GridSpec<T> {
        &self.grid
    }

    fn names(&self) -> &'static [&'static str] {
        &["f"]
    }

    fn cache(&self, state: &[T]) -> Result<BurgersCache<T>> {
        self.check_state(state)?;
        let n = state.len();
        let nx = self.grid.nx;
        let mut c = BurgersCache { f: state.to_vec(), ft: vec![T::zero(); n], fx: vec![T::zero(); n], fxx: vec![T::zero(); n] };
        apply_t(&self.ops.dt, nx, state, &mut c.ft);
        apply_x(&self.ops.dx, nx, state, &mut c.fx);
        apply_x(&self.ops.dxx, nx, state, &mut c.fxx);
        Ok(c)
    }

    fn residual_from(&self, c: &BurgersCache<T>) -> Vec<T> {
        let nx = self.grid.nx;
        (0..c.f.len())
            .map(|i| {
                let adv = self.advection[i / nx];
                c.ft[i] + (c.f[i] + adv) * c.fx[i] - self.spec.nu * c.fxx[i] - self.forcing[i]
            })
            .collect()
    }

    fn row_terms(&self, c: &BurgersCache<T>, row: usize, emit: &mut dyn FnMut(usize, T)) {
        let g = &self.grid;
        let (kx, kt) = g.unflat(row);
        let (ts, tw) = self.ops.dt.row(kt);
        for (m, &w) in tw.iter().enumerate() {
            emit(g.flat(kx, ts + m), w);
        }
        emit(row, c.fx[row]);
        let a = c.f[row] + self.advection[kt];
        let (xs, xw) = self.ops.dx.row(kx);
        for (l, &w) in xw.iter().enumerate() {
            emit(g.flat(xs + l, kt), a * w);
        }
        let (ss, sw) = self.ops.dxx.row(kx);
        for (l, &w) in sw.iter().enumerate() {
            emit(g.flat(ss + l, kt), -self.spec.nu * w);
        }
    }

    fn targets(&self, _delta: T, chi: T) -> Result<Vec<T>> {
        let g = &self.grid;
        let mut out = vec![T::zero(); g.nodes()];
        for kt in 0..g.nt {
            for kx in 0..g.nx {
                let (x, t) = (g.x(kx), g.t(kt));
                match node_kind(g.nx, kx, kt) {
                    DofKind::Initial => out[g.flat(kx, kt)] = self.spec.exact(x, T::zero())?,
                    DofKind::Boundary => {
                        let truth = self.spec.exact(x, t)?;
                        let relaxed = self.spec.exact(x, T::zero())?;
                        out[g.flat(kx, kt)] = chi * truth + (T::one() - chi) * relaxed;
                    }
                    DofKind::Unknown => {}
                }
            }
        }
        Ok(out)
    }
}
