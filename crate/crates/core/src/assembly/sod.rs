use super::{apply_t, apply_x, Discrete, Operators};
use crate::error::{Error, Result};
use crate::grid::{node_kind, DofKind, GridSpec};
use crate::problems::{Side, SodSpec};
use crate::scalar::Real;

pub const SOD_FIELDS: [&str; 3] = ["rho", "v", "e"];

/// One-dimensional compressible Navier–Stokes in `(rho, v, e)`:
///
/// ```text
/// R_rho = rho_t + v rho_x + rho v_x
/// R_v   = rho (v_t + v v_x) + (g-1)(rho_x e + rho e_x) - 4/3 mu v_xx
/// R_e   = rho (e_t + v e_x) + ((g-1) rho e - 4/3 mu v_x) v_x - kappa/c_v e_xx
/// ```
#[derive(Debug, Clone)]
pub struct SodDiscrete<T> {
    pub spec: SodSpec<T>,
    pub grid: GridSpec<T>,
    pub ops: Operators<T>,
}

#[derive(Debug, Clone)]
pub struct SodCache<T> {
    rho: [Vec<T>; 3],
    v: [Vec<T>; 4],
    e: [Vec<T>; 4],
}

// cache slot order: value, t, x, xx
const VAL: usize = 0;
const DT: usize = 1;
const DX: usize = 2;
const DXX: usize = 3;

impl<T: Real> SodDiscrete<T> {
    pub fn new(spec: SodSpec<T>, grid: GridSpec<T>) -> Result<Self> {
        spec.validate()?;
        let ops = Operators::new(&grid)?;
        if !ops.matches(&grid) {
            return Err(Error::DimensionMismatch { expected: grid.nx, got: ops.dx.n() });
        }
        Ok(Self { spec, grid, ops })
    }

    fn derivs<const K: usize>(&self, f: &[T]) -> [Vec<T>; K] {
        let nx = self.grid.nx;
        let n = f.len();
        let mut out: [Vec<T>; K] = std::array::from_fn(|_| vec![T::zero(); n]);
        out[VAL].copy_from_slice(f);
        apply_t(&self.ops.dt, nx, f, &mut out[DT]);
        apply_x(&self.ops.dx, nx, f, &mut out[DX]);
        if K > DXX {
            apply_x(&self.ops.dxx, nx, f, &mut out[DXX]);
        }
        out
    }
}

impl<T: Real> Discrete<T> for SodDiscrete<T> {
    type Cache = SodCache<T>;

    fn fields(&self) -> usize {
        3
    }

    fn grid(&self) -> &GridSpec<T> {
        &self.grid
    }

    fn names(&self) -> &'static [&'static str] {
        &SOD_FIELDS
    }

    fn cache(&self, state: &[T]) -> Result<SodCache<T>> {
        self.check_state(state)?;
        let n = self.grid.nodes();
        Ok(SodCache {
            rho: self.derivs::<3>(&state[..n]),
            v: self.derivs::<4>(&state[n..2 * n]),
            e: self.derivs::<4>(&state[2 * n..]),
        })
    }

    fn residual_from(&self, c: &SodCache<T>) -> Vec<T> {
        let n = self.grid.nodes();
        let gm1 = self.spec.gamma - T::one();
        let visc = T::lit(4.0 / 3.0) * self.spec.mu;
        let cond = self.spec.kappa / self.spec.cv;
        let mut out = vec![T::zero(); 3 * n];
        for i in 0..n {
            let (r, rt, rx) = (c.rho[VAL][i], c.rho[DT][i], c.rho[DX][i]);
            let (v, vt, vx, vxx) = (c.v[VAL][i], c.v[DT][i], c.v[DX][i], c.v[DXX][i]);
            let (e, et, ex, exx) = (c.e[VAL][i], c.e[DT][i], c.e[DX][i], c.e[DXX][i]);
            out[i] = rt + v * rx + r * vx;
            out[n + i] = r * (vt + v * vx) + gm1 * (rx * e + r * ex) - visc * vxx;
            out[2 * n + i] = r * (et + v * ex) + (gm1 * r * e - visc * vx) * vx - cond * exx;
        }
        out
    }

    fn row_terms(&self, c: &SodCache<T>, row: usize, emit: &mut dyn FnMut(usize, T)) {
        let g = &self.grid;
        let n = g.nodes();
        let field = row / n;
        let i = row % n;
        let (kx, kt) = g.unflat(i);
        let gm1 = self.spec.gamma - T::one();
        let visc = T::lit(4.0 / 3.0) * self.spec.mu;
        let cond = self.spec.kappa / self.spec.cv;
        let (r, rx) = (c.rho[VAL][i], c.rho[DX][i]);
        let (v, vt, vx) = (c.v[VAL][i], c.v[DT][i], c.v[DX][i]);
        let (e, et, ex) = (c.e[VAL][i], c.e[DT][i], c.e[DX][i]);
        let (ts, tw) = self.ops.dt.row(kt);
        let (xs, xw) = self.ops.dx.row(kx);
        let (ss, sw) = self.ops.dxx.row(kx);
        // block emitters: a * Dt, b * Dx, d * Dxx and a diagonal term
        let block = |col_field: usize, a: Option<T>, b: Option<T>, d: Option<T>, diag: T, emit: &mut dyn FnMut(usize, T)| {
            let off = col_field * n;
            if let Some(a) = a {
                for (m, &w) in tw.iter().enumerate() {
                    emit(off + g.flat(kx, ts + m), a * w);
                }
            }
            if let Some(b) = b {
                for (l, &w) in xw.iter().enumerate() {
                    emit(off + g.flat(xs + l, kt), b * w);
                }
            }
            if let Some(d) = d {
                for (l, &w) in sw.iter().enumerate() {
                    emit(off + g.flat(ss + l, kt), d * w);
                }
            }
            emit(off + i, diag);
        };
        match field {
            0 => {
                block(0, Some(T::one()), Some(v), None, vx, emit);
                block(1, None, Some(r), None, rx, emit);
            }
            1 => {
                block(0, None, Some(gm1 * e), None, vt + v * vx + gm1 * ex, emit);
                block(1, Some(r), Some(r * v), Some(-visc), r * vx, emit);
                block(2, None, Some(gm1 * r), None, gm1 * rx, emit);
            }
            _ => {
                block(0, None, None, None, et + v * ex + gm1 * e * vx, emit);
                block(1, None, Some(gm1 * r * e - T::lit(2.0) * visc * vx), None, r * ex, emit);
                block(2, Some(r), Some(r * v), Some(-cond), gm1 * r * vx, emit);
            }
        }
    }

    fn targets(&self, delta: T, chi: T) -> Result<Vec<T>> {
        let g = &self.grid;
        let n = g.nodes();
        let mut out = vec![T::zero(); 3 * n];
        for kt in 0..g.nt {
            for kx in 0..g.nx {
                let x = g.x(kx);
                let p = match node_kind(g.nx, kx, kt) {
                    DofKind::Initial => self.spec.initial(x, delta),
                    DofKind::Boundary => {
                        let side = if kx == 0 { Side::Left } else { Side::Right };
                        self.spec.boundary(side, x, chi, delta)
                    }
                    DofKind::Unknown => continue,
                };
                let i = g.flat(kx, kt);
                out[i] = p.rho;
                out[n + i] = p.v;
                out[2 * n + i] = p.e;
            }
        }
        Ok(out)
    }
}
