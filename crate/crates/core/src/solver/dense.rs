//! Dense row-major kernels used by the frontal factorization, plus a plain
//! dense LU that serves as a reference.

use crate::error::{Error, Result};
use crate::scalar::Real;

const PANEL: usize = 32;

/// Partial LU of the leading `s` columns of an `n x n` row-major front.
///
/// Pivots are searched only among the first `s` rows. On return the
/// leading block holds `L11 \ U11`, the top-right block `U12`, the
/// bottom-left `L21` and the trailing block the Schur complement. `perm[i]`
/// is the original front row now in position `i`.
pub fn partial_lu<T: Real>(a: &mut [T], n: usize, s: usize, tiny: T) -> std::result::Result<Vec<usize>, usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut kb = 0;
    while kb < s {
        let ke = (kb + PANEL).min(s);
        // unblocked factorization of the panel columns
        for k in kb..ke {
            let mut piv = k;
            let mut best = a[k * n + k].abs();
            for r in k + 1..s {
                let v = a[r * n + k].abs();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if !(best > tiny) {
                return Err(k);
            }
            if piv != k {
                for c in 0..n {
                    a.swap(k * n + c, piv * n + c);
                }
                perm.swap(k, piv);
            }
            let d = a[k * n + k];
            for r in k + 1..n {
                let l = a[r * n + k] / d;
                a[r * n + k] = l;
                if l != T::zero() {
                    for c in k + 1..ke {
                        let u = a[k * n + c];
                        a[r * n + c] -= l * u;
                    }
                }
            }
        }
        if ke < n {
            // U rows of the panel: forward substitution with unit L
            for k in kb..ke {
                for kk in kb..k {
                    let l = a[k * n + kk];
                    if l != T::zero() {
                        let (upper, lower) = a.split_at_mut(k * n);
                        let src = &upper[kk * n + ke..kk * n + n];
                        let dst = &mut lower[ke..n];
                        for (d, s) in dst.iter_mut().zip(src) {
                            *d -= l * *s;
                        }
                    }
                }
            }
            // trailing update of rows below the panel
            let (top, bottom) = a.split_at_mut(ke * n);
            for row in bottom.chunks_exact_mut(n) {
                let (lpart, rest) = row.split_at_mut(ke);
                let trail = &mut rest[..n - ke];
                for kk in kb..ke {
                    let l = lpart[kk];
                    if l != T::zero() {
                        let u = &top[kk * n + ke..kk * n + n];
                        for (d, s) in trail.iter_mut().zip(u) {
                            *d -= l * *s;
                        }
                    }
                }
            }
        }
        kb = ke;
    }
    Ok(perm)
}

/// Row and column order of a front after [`front_lu`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrontPivots {
    /// `rows[i]` is the original front row now in position `i`
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    /// pivots taken; fully summed rows and columns `eliminated..s` are
    /// left in the trailing block for a later front
    pub eliminated: usize,
}

/// Apply pivots `kb..kd` to columns `c0..n`: U rows by unit-lower forward
/// substitution, then the rank update of rows `kd..n`.
fn flush_panel<T: Real>(a: &mut [T], n: usize, kb: usize, kd: usize, c0: usize) {
    if c0 >= n || kd == kb {
        return;
    }
    for k in kb..kd {
        for kk in kb..k {
            let l = a[k * n + kk];
            if l != T::zero() {
                let (upper, lower) = a.split_at_mut(k * n);
                let src = &upper[kk * n + c0..kk * n + n];
                for (d, s) in lower[c0..n].iter_mut().zip(src) {
                    *d -= l * *s;
                }
            }
        }
    }
    let (top, bottom) = a.split_at_mut(kd * n);
    for row in bottom.chunks_exact_mut(n) {
        let (lpart, rest) = row.split_at_mut(c0);
        for kk in kb..kd {
            let l = lpart[kk];
            if l != T::zero() {
                let u = &top[kk * n + c0..kk * n + n];
                for (d, s) in rest.iter_mut().zip(u) {
                    *d -= l * *s;
                }
            }
        }
    }
}

/// Threshold-pivoted partial LU of the leading `s` rows and columns of an
/// `n x n` row-major front.
///
/// A pivot in column `k` is taken from the fully summed rows if it exceeds
/// `tiny` and `threshold` times the largest entry of the column. Columns
/// without an acceptable pivot are moved behind the remaining candidates
/// and, if none succeeds, delayed. The trailing `(n - eliminated)` block
/// holds the Schur complement on return.
pub fn front_lu<T: Real>(a: &mut [T], n: usize, s: usize, tiny: T, threshold: T) -> FrontPivots {
    let mut rows: Vec<usize> = (0..n).collect();
    let mut cols: Vec<usize> = (0..n).collect();
    let mut k = 0;
    let mut lim = s;
    while k < lim {
        let kb = k;
        let mut ke = (kb + PANEL).min(lim);
        let mut flushed = false;
        while k < ke {
            let mut piv = k;
            let mut best = a[k * n + k].abs();
            for r in k + 1..s {
                let v = a[r * n + k].abs();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            let colmax = (s..n).fold(best, |m, r| m.max(a[r * n + k].abs()));
            if !(best > tiny) || best < threshold * colmax {
                if k > kb {
                    // bring the rest of the front up to date before searching
                    flush_panel(a, n, kb, k, ke);
                    flushed = true;
                    break;
                }
                lim -= 1;
                if lim > k {
                    for r in 0..n {
                        a.swap(r * n + k, r * n + lim);
                    }
                    cols.swap(k, lim);
                }
                ke = ke.min(lim);
                continue;
            }
            if piv != k {
                for c in 0..n {
                    a.swap(k * n + c, piv * n + c);
                }
                rows.swap(k, piv);
            }
            let d = a[k * n + k];
            for r in k + 1..n {
                let l = a[r * n + k] / d;
                a[r * n + k] = l;
                if l != T::zero() {
                    for c in k + 1..ke {
                        let u = a[k * n + c];
                        a[r * n + c] -= l * u;
                    }
                }
            }
            k += 1;
        }
        if !flushed {
            flush_panel(a, n, kb, k, ke);
        }
    }
    FrontPivots { rows, cols, eliminated: k }
}

/// Dense LU with row partial pivoting.
#[derive(Debug, Clone)]
pub struct DenseLu<T> {
    n: usize,
    lu: Vec<T>,
    perm: Vec<usize>,
}

impl<T: Real> DenseLu<T> {
    pub fn factor(a: &[Vec<T>]) -> Result<Self> {
        let n = a.len();
        if a.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare { rows: n, cols: a.first().map_or(0, |r| r.len()) });
        }
        let mut lu: Vec<T> = a.iter().flatten().copied().collect();
        let scale = a.iter().map(|r| r.iter().map(|v| v.abs()).sum::<T>()).fold(T::zero(), T::max);
        let tiny = scale * T::eps() * T::from_usize_lossy(n.max(1));
        let perm = partial_lu(&mut lu, n, n, tiny).map_err(|row| Error::SingularPivot { row })?;
        Ok(Self { n, lu, perm })
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.n;
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: T = (0..i).map(|k| self.lu[i * n + k] * x[k]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: T = (i + 1..n).map(|k| self.lu[i * n + k] * x[k]).sum();
            x[i] = (x[i] - s) / self.lu[i * n + i];
        }
        x
    }

    pub fn solve_transpose(&self, b: &[T]) -> Vec<T> {
        let n = self.n;
        let mut w = b.to_vec();
        for i in 0..n {
            let s: T = (0..i).map(|k| self.lu[k * n + i] * w[k]).sum();
            w[i] = (w[i] - s) / self.lu[i * n + i];
        }
        for i in (0..n).rev() {
            let s: T = (i + 1..n).map(|k| self.lu[k * n + i] * w[k]).sum();
            w[i] -= s;
        }
        let mut x = vec![T::zero(); n];
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = w[i];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_lu_round_trip() {
        let a = vec![vec![0.0, 2.0, 1.0], vec![1.0, 1.0, 0.0], vec![3.0, 0.0, 1.0]];
        let lu = DenseLu::factor(&a).unwrap();
        let x = lu.solve(&[1.0, 2.0, 3.0]);
        for (i, row) in a.iter().enumerate() {
            let r: f64 = row.iter().zip(&x).map(|(a, b)| a * b).sum();
            assert!((r - [1.0, 2.0, 3.0][i]).abs() < 1e-14);
        }
        let y = lu.solve_transpose(&[1.0, 0.0, -1.0]);
        for j in 0..3 {
            let r: f64 = (0..3).map(|i| a[i][j] * y[i]).sum();
            assert!((r - [1.0, 0.0, -1.0][j]).abs() < 1e-14);
        }
    }

    #[test]
    fn panel_boundary_matches_unblocked() {
        // size above the panel width exercises the blocked path
        let n = 70;
        let a: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| ((i * 7 + j * 13) % 17) as f64 - 8.0 + if i == j { 40.0 } else { 0.0 }).collect())
            .collect();
        let lu = DenseLu::factor(&a).unwrap();
        let b: Vec<f64> = (0..n).map(|i| i as f64).collect();
        let x = lu.solve(&b);
        for (i, row) in a.iter().enumerate() {
            let r: f64 = row.iter().zip(&x).map(|(a, b)| a * b).sum();
            assert!((r - b[i]).abs() < 1e-10);
        }
    }

    #[test]
    fn singular_detected() {
        let a = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert!(matches!(DenseLu::factor(&a), Err(Error::SingularPivot { row: 1 })));
    }
}
