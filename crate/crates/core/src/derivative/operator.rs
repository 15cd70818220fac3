use std::io::Write;

use super::stencil::{boundary_closures, interior_connection_coefficients};
use crate::error::{Error, Result};
use crate::scalar::{to_real, Real};
use crate::wavelet::FieldGrid2D;

/// Spacetime direction an operator acts along.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Direction {
    X,
    T,
}

/// Banded derivative matrix of scaled connection coefficients with dense
/// one-sided boundary rows.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeOperator<T> {
    p: usize,
    alpha: usize,
    direction: Direction,
    n: usize,
    spacing: T,
    half_width: usize,
    interior: Vec<T>,
    left: Vec<Vec<T>>,
    right: Vec<Vec<T>>,
}

impl<T: Real> DerivativeOperator<T> {
    /// Build the `alpha`-th derivative operator on `n` uniform nodes.
    pub fn new(p: usize, alpha: usize, direction: Direction, n: usize, spacing: T) -> Result<Self> {
        let (stencil, spec) = interior_connection_coefficients(p, alpha)?;
        let min = 2 * (p - 1) + 1;
        if n < min {
            return Err(Error::OperatorTooSmall { n, p, min });
        }
        if !(spacing > T::zero()) || !spacing.is_finite() {
            return Err(Error::InvalidParameter(format!("spacing must be positive, got {spacing}")));
        }
        let scale = T::one() / spacing.powi(alpha as i32);
        let interior: Vec<T> = stencil.iter().map(|w| to_real::<T, _>(w) * scale).collect();
        let closures = boundary_closures(p, alpha)?;
        let left: Vec<Vec<T>> = closures
            .iter()
            .map(|row| row.iter().map(|w| to_real::<T, _>(w) * scale).collect())
            .collect();
        let sign = if alpha.is_multiple_of(2) { T::one() } else { -T::one() };
        let right = left
            .iter()
            .map(|row| row.iter().rev().map(|w| *w * sign).collect())
            .collect();
        Ok(Self { p, alpha, direction, n, spacing, half_width: spec.half_width, interior, left, right })
    }

    pub fn order(&self) -> usize {
        self.p
    }
    pub fn alpha(&self) -> usize {
        self.alpha
    }
    pub fn direction(&self) -> Direction {
        self.direction
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn spacing(&self) -> T {
        self.spacing
    }
    pub fn half_width(&self) -> usize {
        self.half_width
    }

    /// Translation-invariant row used away from the boundaries, offsets
    /// `-h..=h`.
    pub fn interior_stencil(&self) -> &[T] {
        &self.interior
    }

    /// Row `i` as `(first column, coefficients)`.
    #[inline]
    pub fn row(&self, i: usize) -> (usize, &[T]) {
        let h = self.half_width;
        if i < h {
            (0, &self.left[i])
        } else if i + h >= self.n {
            (self.n - self.p, &self.right[self.n - 1 - i])
        } else {
            (i - h, &self.interior)
        }
    }

    /// Largest column reach `|col - row|` over all rows.
    pub fn bandwidth(&self) -> usize {
        self.half_width.max(self.p - 1)
    }

    /// `out = D * input` along one line.
    pub fn apply_line(&self, input: &[T], out: &mut [T]) {
        debug_assert_eq!(input.len(), self.n);
        for (i, o) in out.iter_mut().enumerate() {
            let (start, w) = self.row(i);
            *o = w.iter().zip(&input[start..]).map(|(a, b)| *a * *b).sum();
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        (0..self.n)
            .map(|i| {
                let mut r = vec![T::zero(); self.n];
                let (start, w) = self.row(i);
                r[start..start + w.len()].copy_from_slice(w);
                r
            })
            .collect()
    }

    /// Dump every nonzero as `row,offset,weight`.
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "row,offset,weight")?;
        for i in 0..self.n {
            let (start, w) = self.row(i);
            for (k, v) in w.iter().enumerate() {
                writeln!(out, "{},{},{}", i, (start + k) as i64 - i as i64, v)?;
            }
        }
        Ok(())
    }
}

/// Apply an operator along its direction: `x` contracts the first index,
/// `t` the second.
pub fn apply<T: Real>(op: &DerivativeOperator<T>, field: &FieldGrid2D<T>) -> Result<FieldGrid2D<T>> {
    let extent = match op.direction {
        Direction::X => field.nx(),
        Direction::T => field.nt(),
    };
    if extent != op.n {
        return Err(Error::DimensionMismatch { expected: op.n, got: extent });
    }
    let mut out = field.clone();
    let (nx, nt) = (field.nx(), field.nt());
    match op.direction {
        Direction::X => {
            let src = field.values();
            let dst = out.values_mut();
            for kt in 0..nt {
                op.apply_line(&src[kt * nx..(kt + 1) * nx], &mut dst[kt * nx..(kt + 1) * nx]);
            }
        }
        Direction::T => {
            let mut line = vec![T::zero(); nt];
            let mut res = vec![T::zero(); nt];
            for kx in 0..nx {
                for kt in 0..nt {
                    line[kt] = field.get(kx, kt);
                }
                op.apply_line(&line, &mut res);
                for kt in 0..nt {
                    out.set(kx, kt, res[kt]);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_small_and_alpha_zero() {
        assert!(matches!(
            DerivativeOperator::<f64>::new(6, 1, Direction::X, 10, 0.1),
            Err(Error::OperatorTooSmall { .. })
        ));
        assert!(DerivativeOperator::<f64>::new(6, 0, Direction::X, 49, 0.1).is_err());
    }

    #[test]
    fn right_rows_mirror_left() {
        let n = 25;
        let op = DerivativeOperator::<f64>::new(6, 1, Direction::X, n, 0.5).unwrap();
        let xs: Vec<f64> = (0..n).map(|k| k as f64 * 0.5).collect();
        let f: Vec<f64> = xs.iter().map(|x| x * x).collect();
        let mut d = vec![0.0; n];
        op.apply_line(&f, &mut d);
        for (x, dv) in xs.iter().zip(&d) {
            assert!((dv - 2.0 * x).abs() < 1e-10, "{dv} vs {}", 2.0 * x);
        }
    }

    #[test]
    fn csv_dump_lists_every_entry() {
        let op = DerivativeOperator::<f64>::new(4, 1, Direction::T, 9, 1.0).unwrap();
        let mut buf = Vec::new();
        op.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("row,offset,weight\n0,0,"));
        let total: usize = (0..9).map(|i| op.row(i).1.len()).sum();
        assert_eq!(text.lines().count(), total + 1);
    }
}
