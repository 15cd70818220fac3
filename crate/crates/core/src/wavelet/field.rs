use crate::error::{Error, Result};
use crate::scalar::{max_abs, Real};

/// Number of dyadic nodes along one direction at level `j` for order `p`.
pub fn node_count(level: usize, p: usize) -> usize {
    (1usize << level) * p + 1
}

/// Dense spacetime samples `f(x_k, t_n)`, stored column-stacked with the
/// spatial index fastest: `flat = kx + nx * kt`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid2D<T> {
    level: usize,
    px: usize,
    pt: usize,
    nx: usize,
    nt: usize,
    values: Vec<T>,
}

impl<T: Real> FieldGrid2D<T> {
    pub fn zeros(level: usize, px: usize, pt: usize) -> Self {
        Self::constant(level, px, pt, T::zero())
    }

    pub fn constant(level: usize, px: usize, pt: usize, c: T) -> Self {
        let nx = node_count(level, px);
        let nt = node_count(level, pt);
        Self { level, px, pt, nx, nt, values: vec![c; nx * nt] }
    }

    /// Sample from node indices `(kx, kt)`.
    pub fn from_index_fn(level: usize, px: usize, pt: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let nx = node_count(level, px);
        let nt = node_count(level, pt);
        let mut values = Vec::with_capacity(nx * nt);
        for kt in 0..nt {
            for kx in 0..nx {
                values.push(f(kx, kt));
            }
        }
        Self { level, px, pt, nx, nt, values }
    }

    pub fn from_values(level: usize, px: usize, pt: usize, values: Vec<T>) -> Result<Self> {
        let nx = node_count(level, px);
        let nt = node_count(level, pt);
        if values.len() != nx * nt {
            return Err(Error::DimensionMismatch { expected: nx * nt, got: values.len() });
        }
        Ok(Self { level, px, pt, nx, nt, values })
    }

    pub fn level(&self) -> usize {
        self.level
    }
    pub fn px(&self) -> usize {
        self.px
    }
    pub fn pt(&self) -> usize {
        self.pt
    }
    pub fn nx(&self) -> usize {
        self.nx
    }
    pub fn nt(&self) -> usize {
        self.nt
    }
    pub fn len(&self) -> usize {
        self.values.len()
    }
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn get(&self, kx: usize, kt: usize) -> T {
        self.values[kx + self.nx * kt]
    }

    #[inline]
    pub fn set(&mut self, kx: usize, kt: usize, v: T) {
        self.values[kx + self.nx * kt] = v;
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    /// Spatial profile at time index `kt`.
    pub fn time_slice(&self, kt: usize) -> &[T] {
        &self.values[kt * self.nx..(kt + 1) * self.nx]
    }

    pub fn max_abs(&self) -> T {
        max_abs(&self.values)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Same shape check used before binary operations.
    pub fn same_shape(&self, other: &Self) -> bool {
        self.nx == other.nx && self.nt == other.nt
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v = f(*v));
        out
    }

    /// Even-node restriction to level `j - 1`.
    pub fn restrict(&self) -> Result<Self> {
        if self.level < 2 {
            return Err(Error::LevelTooLow(self.level));
        }
        Ok(Self::from_index_fn(self.level - 1, self.px, self.pt, |kx, kt| {
            self.get(2 * kx, 2 * kt)
        }))
    }
}

/// One detail subband, stored with its own column-stacked shape.
#[derive(Debug, Clone, PartialEq)]
pub struct Subband<T> {
    pub nx: usize,
    pub nt: usize,
    pub values: Vec<T>,
}

impl<T: Real> Subband<T> {
    fn zeros(nx: usize, nt: usize) -> Self {
        Self { nx, nt, values: vec![T::zero(); nx * nt] }
    }

    pub fn get(&self, kx: usize, kt: usize) -> T {
        self.values[kx + self.nx * kt]
    }

    pub fn max_abs(&self) -> T {
        max_abs(&self.values)
    }
}

/// Coarse field plus the three detail subbands of one 2D analysis step:
/// `x` (odd x, even t), `t` (even x, odd t), `xt` (odd x, odd t).
#[derive(Debug, Clone, PartialEq)]
pub struct DetailField<T> {
    pub coarse: FieldGrid2D<T>,
    pub detail_x: Subband<T>,
    pub detail_t: Subband<T>,
    pub detail_xt: Subband<T>,
}

impl<T: Real> DetailField<T> {
    /// Coarse field with all details zero.
    pub fn zero_details(coarse: FieldGrid2D<T>) -> Self {
        let (cx, ct) = (coarse.nx(), coarse.nt());
        Self {
            detail_x: Subband::zeros(cx - 1, ct),
            detail_t: Subband::zeros(cx, ct - 1),
            detail_xt: Subband::zeros(cx - 1, ct - 1),
            coarse,
        }
    }

    pub fn coefficient_count(&self) -> usize {
        self.coarse.len() + self.detail_x.values.len() + self.detail_t.values.len() + self.detail_xt.values.len()
    }

    /// Largest detail magnitude over all subbands.
    pub fn max_detail(&self) -> T {
        self.detail_x
            .max_abs()
            .max(self.detail_t.max_abs())
            .max(self.detail_xt.max_abs())
    }

    pub(crate) fn new(coarse: FieldGrid2D<T>, detail_x: Subband<T>, detail_t: Subband<T>, detail_xt: Subband<T>) -> Self {
        Self { coarse, detail_x, detail_t, detail_xt }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_counts() {
        assert_eq!(node_count(3, 6), 49);
        assert_eq!(node_count(3, 4), 33);
        assert_eq!(node_count(1, 4), 9);
    }

    #[test]
    fn column_stacking() {
        let f = FieldGrid2D::<f64>::from_index_fn(1, 4, 4, |kx, kt| (kx + 100 * kt) as f64);
        assert_eq!(f.values()[3 + 9 * 2], 203.0);
        assert_eq!(f.get(3, 2), 203.0);
        assert_eq!(f.time_slice(1)[0], 100.0);
    }

    #[test]
    fn wrong_length_rejected() {
        assert!(FieldGrid2D::<f64>::from_values(1, 4, 4, vec![0.0; 80]).is_err());
    }
}
