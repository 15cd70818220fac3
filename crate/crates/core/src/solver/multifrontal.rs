//! Multifrontal LU with dense fronts.
//!
//! The symbolic phase (ordering, supernode tree, front index lists and the
//! maps from matrix entries into fronts) depends only on the structure and
//! is reused for every matrix with the same pattern.

use log::warn;

use super::dense::front_lu;
use super::ordering::{nested_dissection, Graph, Ordering};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sparse::SparseTangent;

/// Leaf block size for the dissection.
const LEAF: usize = 96;

#[derive(Debug, Clone)]
struct Front {
    /// first and one-past-last new index of the fully summed variables
    start: usize,
    end: usize,
    /// new indices of the non-fully-summed rows/columns, ascending
    update: Vec<usize>,
    parent: Option<usize>,
}

impl Front {
    fn pivots(&self) -> usize {
        self.end - self.start
    }
    fn size(&self) -> usize {
        self.pivots() + self.update.len()
    }
}

/// Structure-only analysis of a square sparse matrix.
#[derive(Debug, Clone)]
pub struct Symbolic {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    ordering: Ordering,
    fronts: Vec<Front>,
    /// front containing each new index
    owner: Vec<usize>,
    /// column-wise access into the CSR value array
    csc_ptr: Vec<usize>,
    csc_row: Vec<usize>,
    csc_val: Vec<usize>,
}

impl Symbolic {
    pub fn analyse<T: Real>(a: &SparseTangent<T>) -> Result<Self> {
        let n = a.n_rows();
        if n != a.n_cols() {
            return Err(Error::NotSquare { rows: n, cols: a.n_cols() });
        }
        let graph = Graph::symmetrized(n, a.row_ptr(), a.col_idx());
        let ordering = nested_dissection(&graph, LEAF);
        let mut owner = vec![0; n];
        for (f, r) in ordering.supernodes.iter().enumerate() {
            for v in r.clone() {
                owner[v] = f;
            }
        }
        let mut fronts: Vec<Front> = ordering
            .supernodes
            .iter()
            .map(|r| Front { start: r.start, end: r.end, update: Vec::new(), parent: None })
            .collect();
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); fronts.len()];
        let mut mark = vec![usize::MAX; n];
        for f in 0..fronts.len() {
            let (start, end) = (fronts[f].start, fronts[f].end);
            let mut upd = Vec::new();
            for new in start..end {
                for &w in graph.neighbors(ordering.perm[new]) {
                    let wn = ordering.iperm[w];
                    if wn >= end && mark[wn] != f {
                        mark[wn] = f;
                        upd.push(wn);
                    }
                }
            }
            for &c in &children[f] {
                for &wn in &fronts[c].update {
                    if wn >= end && mark[wn] != f {
                        mark[wn] = f;
                        upd.push(wn);
                    }
                }
            }
            upd.sort_unstable();
            if let Some(&first) = upd.first() {
                let p = owner[first];
                fronts[f].parent = Some(p);
                children[p].push(f);
            }
            fronts[f].update = upd;
        }
        // column access
        let nnz = a.nnz();
        let mut csc_ptr = vec![0usize; n + 1];
        for &c in a.col_idx() {
            csc_ptr[c + 1] += 1;
        }
        for i in 0..n {
            csc_ptr[i + 1] += csc_ptr[i];
        }
        let mut fill = csc_ptr.clone();
        let mut csc_row = vec![0; nnz];
        let mut csc_val = vec![0; nnz];
        for r in 0..n {
            for k in a.row_ptr()[r]..a.row_ptr()[r + 1] {
                let c = a.col_idx()[k];
                csc_row[fill[c]] = r;
                csc_val[fill[c]] = k;
                fill[c] += 1;
            }
        }
        Ok(Self {
            n,
            row_ptr: a.row_ptr().to_vec(),
            col_idx: a.col_idx().to_vec(),
            ordering,
            fronts,
            owner,
            csc_ptr,
            csc_row,
            csc_val,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn front_count(&self) -> usize {
        self.fronts.len()
    }

    pub fn largest_front(&self) -> usize {
        self.fronts.iter().map(Front::size).max().unwrap_or(0)
    }

    /// Entries stored in the factors.
    pub fn factor_nnz(&self) -> usize {
        self.fronts.iter().map(|f| f.size() * f.size() - f.update.len() * f.update.len()).sum()
    }

    fn matches<T: Real>(&self, a: &SparseTangent<T>) -> bool {
        a.n_rows() == self.n && a.row_ptr() == self.row_ptr.as_slice() && a.col_idx() == self.col_idx.as_slice()
    }

    pub fn owner_of(&self, new_index: usize) -> usize {
        self.owner[new_index]
    }
}

/// Relative pivot threshold; weaker pivots are delayed to the parent front.
const PIVOT_THRESHOLD: f64 = 0.01;

#[derive(Debug, Clone)]
struct FrontFactor<T> {
    /// pivot rows and columns as new indices, in elimination order
    piv_rows: Vec<usize>,
    piv_cols: Vec<usize>,
    /// remaining rows and columns of the front (delayed, then update)
    rest_rows: Vec<usize>,
    rest_cols: Vec<usize>,
    /// e x e, unit-lower L11 and U11 packed
    lu11: Vec<T>,
    /// e x rest
    u12: Vec<T>,
    /// rest x e
    l21: Vec<T>,
}

impl<T> FrontFactor<T> {
    fn e(&self) -> usize {
        self.piv_rows.len()
    }
}

/// Contribution block handed to the parent front.
struct Contribution<T> {
    rows: Vec<usize>,
    cols: Vec<usize>,
    delayed: usize,
    block: Vec<T>,
}

/// Numeric factors for one matrix.
#[derive(Debug, Clone)]
pub struct Factorization<T> {
    symbolic: std::sync::Arc<Symbolic>,
    fronts: Vec<FrontFactor<T>>,
    delayed: usize,
}

impl<T: Real> Factorization<T> {
    pub fn factor(symbolic: std::sync::Arc<Symbolic>, a: &SparseTangent<T>) -> Result<Self> {
        if !symbolic.matches(a) {
            return Err(Error::InvalidParameter("matrix structure differs from the analysed pattern".into()));
        }
        let sym = &*symbolic;
        let n = sym.n;
        let vals = a.values();
        let scale = a.norm_inf().max(T::min_positive_value());
        let tiny = scale * T::eps() * T::lit(16.0);
        let threshold = T::lit(PIVOT_THRESHOLD);
        let mut pos_r = vec![usize::MAX; n];
        let mut pos_c = vec![usize::MAX; n];
        let mut pending: Vec<Option<Contribution<T>>> = (0..sym.fronts.len()).map(|_| None).collect();
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); sym.fronts.len()];
        for (f, fr) in sym.fronts.iter().enumerate() {
            if let Some(p) = fr.parent {
                children[p].push(f);
            }
        }
        let mut delayed_total = 0;
        let mut out = Vec::with_capacity(sym.fronts.len());
        for (f, fr) in sym.fronts.iter().enumerate() {
            let blocks: Vec<Contribution<T>> =
                children[f].iter().map(|&c| pending[c].take().expect("child factored before parent")).collect();
            let mut rows: Vec<usize> = (fr.start..fr.end).collect();
            let mut cols = rows.clone();
            for b in &blocks {
                rows.extend_from_slice(&b.rows[..b.delayed]);
                cols.extend_from_slice(&b.cols[..b.delayed]);
            }
            let s = rows.len();
            rows.extend_from_slice(&fr.update);
            cols.extend_from_slice(&fr.update);
            let nf = rows.len();
            for (k, &v) in rows.iter().enumerate() {
                pos_r[v] = k;
            }
            for (k, &v) in cols.iter().enumerate() {
                pos_c[v] = k;
            }
            let mut m = vec![T::zero(); nf * nf];
            for v in fr.start..fr.end {
                let old = sym.ordering.perm[v];
                for k in sym.row_ptr[old]..sym.row_ptr[old + 1] {
                    let c = sym.ordering.iperm[sym.col_idx[k]];
                    if c >= fr.start {
                        m[pos_r[v] * nf + pos_c[c]] += vals[k];
                    }
                }
                for k in sym.csc_ptr[old]..sym.csc_ptr[old + 1] {
                    let r = sym.ordering.iperm[sym.csc_row[k]];
                    if r >= fr.end {
                        m[pos_r[r] * nf + pos_c[v]] += vals[sym.csc_val[k]];
                    }
                }
            }
            for b in blocks {
                let cn = b.cols.len();
                let targets: Vec<usize> = b.cols.iter().map(|&c| pos_c[c]).collect();
                for (i, &ri) in b.rows.iter().enumerate() {
                    let pi = pos_r[ri] * nf;
                    for (v, &tj) in b.block[i * cn..(i + 1) * cn].iter().zip(&targets) {
                        m[pi + tj] += *v;
                    }
                }
            }
            let piv = front_lu(&mut m, nf, s, tiny, threshold);
            let e = piv.eliminated;
            if e < s {
                if fr.parent.is_none() {
                    return Err(Error::SingularPivot { row: sym.ordering.perm[rows[piv.rows[e]]] });
                }
                delayed_total += s - e;
            }
            let u = nf - e;
            let mut lu11 = Vec::with_capacity(e * e);
            let mut u12 = Vec::with_capacity(e * u);
            for r in 0..e {
                lu11.extend_from_slice(&m[r * nf..r * nf + e]);
                u12.extend_from_slice(&m[r * nf + e..(r + 1) * nf]);
            }
            let mut l21 = Vec::with_capacity(u * e);
            let mut schur = Vec::with_capacity(u * u);
            for r in e..nf {
                l21.extend_from_slice(&m[r * nf..r * nf + e]);
                schur.extend_from_slice(&m[r * nf + e..(r + 1) * nf]);
            }
            let ff = FrontFactor {
                piv_rows: piv.rows[..e].iter().map(|&i| rows[i]).collect(),
                piv_cols: piv.cols[..e].iter().map(|&i| cols[i]).collect(),
                rest_rows: piv.rows[e..].iter().map(|&i| rows[i]).collect(),
                rest_cols: piv.cols[e..].iter().map(|&i| cols[i]).collect(),
                lu11,
                u12,
                l21,
            };
            if fr.parent.is_some() {
                pending[f] =
                    Some(Contribution { rows: ff.rest_rows.clone(), cols: ff.rest_cols.clone(), delayed: s - e, block: schur });
            }
            out.push(ff);
        }
        Ok(Self { symbolic, fronts: out, delayed: delayed_total })
    }

    pub fn n(&self) -> usize {
        self.symbolic.n
    }

    /// Pivots passed from a front to its parent during factorization.
    pub fn delayed_pivots(&self) -> usize {
        self.delayed
    }

    /// Solve `A x = b`.
    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let sym = &*self.symbolic;
        let ord = &sym.ordering;
        let mut y: Vec<T> = ord.perm.iter().map(|&o| b[o]).collect();
        let mut z = Vec::with_capacity(sym.n);
        for ff in &self.fronts {
            let (e, base) = (ff.e(), z.len());
            z.extend(ff.piv_rows.iter().map(|&r| y[r]));
            let buf = &mut z[base..];
            for i in 0..e {
                let mut acc = buf[i];
                for k in 0..i {
                    acc -= ff.lu11[i * e + k] * buf[k];
                }
                buf[i] = acc;
            }
            for (r, &g) in ff.rest_rows.iter().enumerate() {
                let d: T = ff.l21[r * e..(r + 1) * e].iter().zip(buf.iter()).map(|(a, b)| *a * *b).sum();
                y[g] -= d;
            }
        }
        let mut x = vec![T::zero(); sym.n];
        let mut end = z.len();
        for ff in self.fronts.iter().rev() {
            let e = ff.e();
            let base = end - e;
            let u = ff.rest_cols.len();
            for i in (0..e).rev() {
                let mut acc = z[base + i];
                for (a, &g) in ff.u12[i * u..(i + 1) * u].iter().zip(&ff.rest_cols) {
                    acc -= *a * x[g];
                }
                for k in i + 1..e {
                    acc -= ff.lu11[i * e + k] * z[base + k];
                }
                z[base + i] = acc / ff.lu11[i * e + i];
                x[ff.piv_cols[i]] = z[base + i];
            }
            end = base;
        }
        let mut out = vec![T::zero(); sym.n];
        for (new, &old) in ord.perm.iter().enumerate() {
            out[old] = x[new];
        }
        out
    }

    /// Solve `A^T x = b`.
    pub fn solve_transpose(&self, b: &[T]) -> Vec<T> {
        let sym = &*self.symbolic;
        let ord = &sym.ordering;
        let mut w: Vec<T> = ord.perm.iter().map(|&o| b[o]).collect();
        let mut z = Vec::with_capacity(sym.n);
        for ff in &self.fronts {
            let (e, base) = (ff.e(), z.len());
            let u = ff.rest_cols.len();
            z.extend(ff.piv_cols.iter().map(|&c| w[c]));
            let buf = &mut z[base..];
            for i in 0..e {
                let mut acc = buf[i];
                for k in 0..i {
                    acc -= ff.lu11[k * e + i] * buf[k];
                }
                buf[i] = acc / ff.lu11[i * e + i];
            }
            for i in 0..e {
                let wi = buf[i];
                if wi != T::zero() {
                    for (a, &g) in ff.u12[i * u..(i + 1) * u].iter().zip(&ff.rest_cols) {
                        w[g] -= *a * wi;
                    }
                }
            }
        }
        let mut x = vec![T::zero(); sym.n];
        let mut end = z.len();
        for ff in self.fronts.iter().rev() {
            let e = ff.e();
            let base = end - e;
            let buf = &mut z[base..end];
            for (r, &g) in ff.rest_rows.iter().enumerate() {
                let xg = x[g];
                if xg != T::zero() {
                    for (bk, l) in buf.iter_mut().zip(&ff.l21[r * e..(r + 1) * e]) {
                        *bk -= *l * xg;
                    }
                }
            }
            for i in (0..e).rev() {
                let mut acc = buf[i];
                for k in i + 1..e {
                    acc -= ff.lu11[k * e + i] * buf[k];
                }
                buf[i] = acc;
                x[ff.piv_rows[i]] = acc;
            }
            end = base;
        }
        let mut out = vec![T::zero(); sym.n];
        for (new, &old) in ord.perm.iter().enumerate() {
            out[old] = x[new];
        }
        out
    }
}

/// Outcome of one linear solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveStats {
    /// `||b - A x||_inf` before and after refinement
    pub residual_before: f64,
    pub residual_after: f64,
    pub refinement_improved: bool,
}

/// Solve with one step of iterative refinement.
pub fn solve_refined<T: Real>(a: &SparseTangent<T>, lu: &Factorization<T>, b: &[T]) -> (Vec<T>, SolveStats) {
    let residual = |x: &[T]| -> (Vec<T>, T) {
        let ax = a.mul(x);
        let r: Vec<T> = b.iter().zip(&ax).map(|(b, a)| *b - *a).collect();
        let m = r.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        (r, m)
    };
    let mut x = lu.solve(b);
    let (r, before) = residual(&x);
    let dx = lu.solve(&r);
    let candidate: Vec<T> = x.iter().zip(&dx).map(|(a, b)| *a + *b).collect();
    let (_, after) = residual(&candidate);
    let improved = after < before || before == T::zero();
    if after <= before {
        x = candidate;
    } else {
        warn!("iterative refinement did not reduce the residual ({before:e} -> {after:e})");
    }
    let stats = SolveStats {
        residual_before: before.to_f64().unwrap_or(f64::NAN),
        residual_after: after.min(before).to_f64().unwrap_or(f64::NAN),
        refinement_improved: improved,
    };
    (x, stats)
}
