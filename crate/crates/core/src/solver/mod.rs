//! Sparse direct solvers.

pub mod dense;
mod multifrontal;
pub mod ordering;

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use dense::DenseLu;
pub use multifrontal::{solve_refined, Factorization, SolveStats, Symbolic};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sparse::SparseTangent;

/// Factor-once, solve-many interface. Implementations may keep structural
/// analysis between calls to [`LinearSolver::factor`] when the pattern is
/// unchanged.
pub trait LinearSolver<T: Real> {
    fn factor(&mut self, a: &SparseTangent<T>) -> Result<()>;
    /// `A x = b` with the most recent factorization.
    fn solve(&self, b: &[T]) -> Result<(Vec<T>, SolveStats)>;
    /// `A^T x = b`, used by condition estimation.
    fn solve_transpose(&self, b: &[T]) -> Result<Vec<T>>;
}

/// In-repo multifrontal LU with nested-dissection ordering.
#[derive(Debug, Clone, Default)]
pub struct MultifrontalLu<T> {
    symbolic: Option<Arc<Symbolic>>,
    numeric: Option<(SparseTangent<T>, Factorization<T>)>,
    analyses: usize,
}

impl<T: Real> MultifrontalLu<T> {
    pub fn new() -> Self {
        Self { symbolic: None, numeric: None, analyses: 0 }
    }

    /// Number of symbolic analyses performed so far.
    pub fn analyses(&self) -> usize {
        self.analyses
    }

    pub fn symbolic(&self) -> Option<&Symbolic> {
        self.symbolic.as_deref()
    }

    fn same_pattern(sym: &Symbolic, a: &SparseTangent<T>, prev: Option<&SparseTangent<T>>) -> bool {
        sym.n() == a.n_rows()
            && prev.is_none_or(|p| p.row_ptr() == a.row_ptr() && p.col_idx() == a.col_idx())
    }
}

impl<T: Real> LinearSolver<T> for MultifrontalLu<T> {
    fn factor(&mut self, a: &SparseTangent<T>) -> Result<()> {
        let reuse = match &self.symbolic {
            Some(sym) => Self::same_pattern(sym, a, self.numeric.as_ref().map(|n| &n.0)),
            None => false,
        };
        if !reuse {
            self.symbolic = Some(Arc::new(Symbolic::analyse(a)?));
            self.analyses += 1;
        }
        let sym = self.symbolic.clone().expect("analysed above");
        let f = match Factorization::factor(sym, a) {
            Ok(f) => f,
            Err(Error::InvalidParameter(_)) => {
                // pattern changed in a way the cheap check missed
                let sym = Arc::new(Symbolic::analyse(a)?);
                self.analyses += 1;
                self.symbolic = Some(sym.clone());
                Factorization::factor(sym, a)?
            }
            Err(e) => return Err(e),
        };
        self.numeric = Some((a.clone(), f));
        Ok(())
    }

    fn solve(&self, b: &[T]) -> Result<(Vec<T>, SolveStats)> {
        let (a, f) = self.numeric.as_ref().ok_or(Error::InvalidParameter("solve before factor".into()))?;
        if b.len() != a.n_rows() {
            return Err(Error::DimensionMismatch { expected: a.n_rows(), got: b.len() });
        }
        Ok(solve_refined(a, f, b))
    }

    fn solve_transpose(&self, b: &[T]) -> Result<Vec<T>> {
        let (a, f) = self.numeric.as_ref().ok_or(Error::InvalidParameter("solve before factor".into()))?;
        if b.len() != a.n_rows() {
            return Err(Error::DimensionMismatch { expected: a.n_rows(), got: b.len() });
        }
        Ok(f.solve_transpose(b))
    }
}

/// One-shot factor and solve with iterative refinement.
pub fn sparse_direct_solve<T: Real>(k: &SparseTangent<T>, rhs: &[T]) -> Result<(Vec<T>, SolveStats)> {
    let mut lu = MultifrontalLu::new();
    lu.factor(k)?;
    lu.solve(rhs)
}

/// Hager–Higham estimate of `||A^{-1}||_1` from forward and adjoint
/// solves. Returns the estimate and whether the iteration settled. With a
/// seed the start vector gets random signs, otherwise it is uniform.
pub fn inverse_norm_one<T: Real, S: LinearSolver<T>>(solver: &S, n: usize, seed: Option<u64>) -> Result<(T, bool)> {
    if n == 0 {
        return Ok((T::zero(), true));
    }
    let w = T::one() / T::from_usize_lossy(n);
    let mut x = match seed {
        Some(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..n).map(|_| if rng.gen::<bool>() { w } else { -w }).collect()
        }
        None => vec![w; n],
    };
    let mut est = T::zero();
    let mut last_j = usize::MAX;
    for _ in 0..5 {
        let (y, _) = solver.solve(&x)?;
        let new_est: T = y.iter().map(|v| v.abs()).sum();
        if new_est <= est && last_j != usize::MAX {
            return Ok((est, true));
        }
        est = new_est;
        let xi: Vec<T> = y.iter().map(|v| if *v >= T::zero() { T::one() } else { -T::one() }).collect();
        let z = solver.solve_transpose(&xi)?;
        let (j, zmax) = z.iter().enumerate().fold((0, T::zero()), |(bj, bm), (i, v)| {
            if v.abs() > bm { (i, v.abs()) } else { (bj, bm) }
        });
        let ztx: T = z.iter().zip(&x).map(|(a, b)| *a * *b).sum();
        if zmax <= ztx || j == last_j {
            return Ok((est, true));
        }
        last_j = j;
        x = vec![T::zero(); n];
        x[j] = T::one();
    }
    Ok((est, false))
}
