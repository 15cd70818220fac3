//! Compressed-row sparse matrices with an optional square field-block layout.

use std::io::Write;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// `fields x fields` equal blocks of `block_size` rows and columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockLayout {
    pub fields: usize,
    pub block_size: usize,
}

/// CSR matrix. Column indices are sorted and unique within each row; the
/// structure is fixed once built and only values change.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseTangent<T> {
    n_rows: usize,
    n_cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<T>,
    blocks: Option<BlockLayout>,
}

impl<T: Real> SparseTangent<T> {
    /// Zero-valued matrix on a given structure.
    pub fn from_pattern(n_rows: usize, n_cols: usize, row_ptr: Vec<usize>, col_idx: Vec<usize>) -> Result<Self> {
        if row_ptr.len() != n_rows + 1 || row_ptr[0] != 0 || *row_ptr.last().unwrap() != col_idx.len() {
            return Err(Error::DimensionMismatch { expected: n_rows + 1, got: row_ptr.len() });
        }
        for r in 0..n_rows {
            let cols = &col_idx[row_ptr[r]..row_ptr[r + 1]];
            if cols.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidParameter(format!("row {r} columns not strictly increasing")));
            }
            if let Some(&c) = cols.last() {
                if c >= n_cols {
                    return Err(Error::IndexOutOfRange { index: c, len: n_cols });
                }
            }
        }
        let nnz = col_idx.len();
        Ok(Self { n_rows, n_cols, row_ptr, col_idx, values: vec![T::zero(); nnz], blocks: None })
    }

    /// Duplicates are summed; explicit zeros are kept in the structure.
    pub fn from_triplets(n_rows: usize, n_cols: usize, triplets: &[(usize, usize, T)]) -> Result<Self> {
        let mut rows: Vec<Vec<(usize, T)>> = vec![Vec::new(); n_rows];
        for &(r, c, v) in triplets {
            if r >= n_rows {
                return Err(Error::IndexOutOfRange { index: r, len: n_rows });
            }
            if c >= n_cols {
                return Err(Error::IndexOutOfRange { index: c, len: n_cols });
            }
            rows[r].push((c, v));
        }
        let mut row_ptr = vec![0];
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        for mut row in rows {
            row.sort_by_key(|e| e.0);
            for (c, v) in row {
                if col_idx.len() > *row_ptr.last().unwrap() && *col_idx.last().unwrap() == c {
                    *values.last_mut().unwrap() += v;
                } else {
                    col_idx.push(c);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Ok(Self { n_rows, n_cols, row_ptr, col_idx, values, blocks: None })
    }

    pub fn from_dense(a: &[Vec<T>]) -> Self {
        let n_cols = a.first().map_or(0, |r| r.len());
        let triplets: Vec<_> = a
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().filter(|(_, v)| **v != T::zero()).map(move |(j, v)| (i, j, *v)))
            .collect();
        Self::from_triplets(a.len(), n_cols, &triplets).expect("dense input is in range")
    }

    pub fn identity(n: usize) -> Self {
        let triplets: Vec<_> = (0..n).map(|i| (i, i, T::one())).collect();
        Self::from_triplets(n, n, &triplets).expect("identity is valid")
    }

    pub fn with_blocks(mut self, layout: BlockLayout) -> Result<Self> {
        let n = layout.fields * layout.block_size;
        if n != self.n_rows || n != self.n_cols {
            return Err(Error::DimensionMismatch { expected: n, got: self.n_rows });
        }
        self.blocks = Some(layout);
        Ok(self)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }
    pub fn n_cols(&self) -> usize {
        self.n_cols
    }
    pub fn nnz(&self) -> usize {
        self.col_idx.len()
    }
    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }
    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }
    pub fn values(&self) -> &[T] {
        &self.values
    }
    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }
    pub fn blocks(&self) -> Option<BlockLayout> {
        self.blocks
    }

    #[inline]
    pub fn row(&self, i: usize) -> (&[usize], &[T]) {
        let (a, b) = (self.row_ptr[i], self.row_ptr[i + 1]);
        (&self.col_idx[a..b], &self.values[a..b])
    }

    /// Mutable row values together with the (immutable) column indices.
    #[inline]
    pub fn row_mut(&mut self, i: usize) -> (&[usize], &mut [T]) {
        let (a, b) = (self.row_ptr[i], self.row_ptr[i + 1]);
        (&self.col_idx[a..b], &mut self.values[a..b])
    }

    /// Value at `(i, j)`, zero outside the structure.
    pub fn get(&self, i: usize, j: usize) -> T {
        let (cols, vals) = self.row(i);
        cols.binary_search(&j).map_or(T::zero(), |k| vals[k])
    }

    pub fn matvec(&self, x: &[T], y: &mut [T]) {
        debug_assert_eq!(x.len(), self.n_cols);
        for (i, yi) in y.iter_mut().enumerate().take(self.n_rows) {
            let (cols, vals) = self.row(i);
            *yi = cols.iter().zip(vals).map(|(&c, &v)| v * x[c]).sum();
        }
    }

    pub fn mul(&self, x: &[T]) -> Vec<T> {
        let mut y = vec![T::zero(); self.n_rows];
        self.matvec(x, &mut y);
        y
    }

    pub fn mul_transpose(&self, x: &[T]) -> Vec<T> {
        let mut y = vec![T::zero(); self.n_cols];
        for (i, &xi) in x.iter().enumerate().take(self.n_rows) {
            let (cols, vals) = self.row(i);
            for (&c, &v) in cols.iter().zip(vals) {
                y[c] += v * xi;
            }
        }
        y
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> T {
        (0..self.n_rows).map(|i| self.row(i).1.iter().map(|v| v.abs()).sum::<T>()).fold(T::zero(), T::max)
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> T {
        let mut sums = vec![T::zero(); self.n_cols];
        for (&c, &v) in self.col_idx.iter().zip(&self.values) {
            sums[c] += v.abs();
        }
        sums.into_iter().fold(T::zero(), T::max)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut out = vec![vec![T::zero(); self.n_cols]; self.n_rows];
        for (i, row) in out.iter_mut().enumerate() {
            let (cols, vals) = self.row(i);
            for (&c, &v) in cols.iter().zip(vals) {
                row[c] = v;
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let triplets: Vec<_> = (0..self.n_rows)
            .flat_map(|i| {
                let (cols, vals) = self.row(i);
                cols.iter().zip(vals).map(move |(&c, &v)| (c, i, v)).collect::<Vec<_>>()
            })
            .collect();
        Self::from_triplets(self.n_cols, self.n_rows, &triplets).expect("transpose is in range")
    }

    /// Rows `rows` and columns `cols` (both as lists of original indices).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        let mut map = vec![usize::MAX; self.n_cols];
        for (k, &c) in cols.iter().enumerate() {
            if c >= self.n_cols {
                return Err(Error::IndexOutOfRange { index: c, len: self.n_cols });
            }
            map[c] = k;
        }
        let sorted = cols.windows(2).all(|w| w[0] < w[1]);
        let mut row_ptr = Vec::with_capacity(rows.len() + 1);
        row_ptr.push(0);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        let mut scratch: Vec<(usize, T)> = Vec::new();
        for &r in rows {
            if r >= self.n_rows {
                return Err(Error::IndexOutOfRange { index: r, len: self.n_rows });
            }
            let (rc, rv) = self.row(r);
            scratch.clear();
            scratch.extend(rc.iter().zip(rv).filter(|(c, _)| map[**c] != usize::MAX).map(|(&c, &v)| (map[c], v)));
            if !sorted {
                scratch.sort_by_key(|e| e.0);
            }
            for &(c, v) in &scratch {
                col_idx.push(c);
                values.push(v);
            }
            row_ptr.push(col_idx.len());
        }
        Ok(Self { n_rows: rows.len(), n_cols: cols.len(), row_ptr, col_idx, values, blocks: None })
    }

    /// Structural nonzero count per field block, row-major `fields x fields`.
    pub fn block_nnz(&self) -> Option<Vec<usize>> {
        let layout = self.blocks?;
        let mut counts = vec![0; layout.fields * layout.fields];
        for i in 0..self.n_rows {
            let bi = i / layout.block_size;
            for &c in self.row(i).0 {
                counts[bi * layout.fields + c / layout.block_size] += 1;
            }
        }
        Some(counts)
    }

    /// Largest `|col - row|` over the structure.
    pub fn bandwidth(&self) -> usize {
        (0..self.n_rows)
            .flat_map(|i| self.row(i).0.iter().map(move |&c| c.abs_diff(i)))
            .max()
            .unwrap_or(0)
    }

    /// Structure as `row,col` lines.
    pub fn write_pattern(&self, mut out: impl Write) -> std::io::Result<()> {
        for i in 0..self.n_rows {
            for &c in self.row(i).0 {
                writeln!(out, "{i},{c}")?;
            }
        }
        Ok(())
    }
}

/// Write the sparsity pattern of `k` to `path`.
pub fn export_pattern<T: Real>(k: &SparseTangent<T>, path: &std::path::Path) -> std::io::Result<()> {
    let file = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(file);
    k.write_pattern(&mut w)?;
    w.flush()
}
