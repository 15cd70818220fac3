//! Spacetime grid description, DOF enumeration and the unknown /
//! boundary / initial partition.

use crate::derivative::{DerivativeOperator, Direction};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::wavelet::{check_order, node_count, FieldGrid2D};

/// Uniform dyadic grid on `[x_lo, x_hi] x [0, t_end]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec<T> {
    pub x_lo: T,
    pub x_hi: T,
    pub t_end: T,
    pub level: usize,
    pub px: usize,
    pub pt: usize,
    pub nx: usize,
    pub nt: usize,
    pub dx: T,
    pub dt: T,
}

pub fn build_grid<T: Real>(x_domain: (T, T), t_end: T, level: usize, px: usize, pt: usize) -> Result<GridSpec<T>> {
    check_order(px)?;
    check_order(pt)?;
    if level == 0 {
        return Err(Error::InvalidParameter("level must be >= 1".into()));
    }
    let (x_lo, x_hi) = x_domain;
    if !(x_hi > x_lo) || !x_lo.is_finite() || !x_hi.is_finite() {
        return Err(Error::DegenerateDomain("x_hi must exceed x_lo"));
    }
    if !(t_end > T::zero()) || !t_end.is_finite() {
        return Err(Error::DegenerateDomain("final time must be positive"));
    }
    let nx = node_count(level, px);
    let nt = node_count(level, pt);
    Ok(GridSpec {
        x_lo,
        x_hi,
        t_end,
        level,
        px,
        pt,
        nx,
        nt,
        dx: (x_hi - x_lo) / T::from_usize_lossy(nx - 1),
        dt: t_end / T::from_usize_lossy(nt - 1),
    })
}

impl<T: Real> GridSpec<T> {
    pub fn x(&self, kx: usize) -> T {
        self.x_lo + T::from_usize_lossy(kx) * self.dx
    }

    pub fn t(&self, kt: usize) -> T {
        T::from_usize_lossy(kt) * self.dt
    }

    /// Single-field node count.
    pub fn nodes(&self) -> usize {
        self.nx * self.nt
    }

    #[inline]
    pub fn flat(&self, kx: usize, kt: usize) -> usize {
        kx + self.nx * kt
    }

    #[inline]
    pub fn unflat(&self, flat: usize) -> (usize, usize) {
        (flat % self.nx, flat / self.nx)
    }

    /// Same domain one level finer.
    pub fn refined(&self) -> Self {
        build_grid((self.x_lo, self.x_hi), self.t_end, self.level + 1, self.px, self.pt)
            .expect("refining a valid grid")
    }

    pub fn at_level(&self, level: usize) -> Result<Self> {
        build_grid((self.x_lo, self.x_hi), self.t_end, level, self.px, self.pt)
    }

    pub fn sample(&self, f: impl Fn(T, T) -> T) -> FieldGrid2D<T> {
        FieldGrid2D::from_index_fn(self.level, self.px, self.pt, |kx, kt| f(self.x(kx), self.t(kt)))
    }

    pub fn zeros(&self) -> FieldGrid2D<T> {
        FieldGrid2D::zeros(self.level, self.px, self.pt)
    }

    pub fn operator(&self, alpha: usize, direction: Direction) -> Result<DerivativeOperator<T>> {
        match direction {
            Direction::X => DerivativeOperator::new(self.px, alpha, direction, self.nx, self.dx),
            Direction::T => DerivativeOperator::new(self.pt, alpha, direction, self.nt, self.dt),
        }
    }
}

/// Which partition set a node belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DofKind {
    Unknown,
    Boundary,
    Initial,
}

/// Classify one node. Corners at `t = 0` count as initial.
pub fn node_kind(nx: usize, kx: usize, kt: usize) -> DofKind {
    if kt == 0 {
        DofKind::Initial
    } else if kx == 0 || kx == nx - 1 {
        DofKind::Boundary
    } else {
        DofKind::Unknown
    }
}

/// Disjoint index sets over global flat indices
/// `field * nx * nt + kx + nx * kt`, each ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct DofPartition {
    pub unknown: Vec<usize>,
    pub boundary: Vec<usize>,
    pub initial: Vec<usize>,
    kinds: Vec<DofKind>,
    /// position of each global index within its own set
    position: Vec<usize>,
}

impl DofPartition {
    pub fn total(&self) -> usize {
        self.kinds.len()
    }

    pub fn kind(&self, global: usize) -> DofKind {
        self.kinds[global]
    }

    /// Position of `global` inside its set.
    pub fn position(&self, global: usize) -> usize {
        self.position[global]
    }

    pub fn set(&self, kind: DofKind) -> &[usize] {
        match kind {
            DofKind::Unknown => &self.unknown,
            DofKind::Boundary => &self.boundary,
            DofKind::Initial => &self.initial,
        }
    }
}

pub fn classify_dofs<T: Real>(grid: &GridSpec<T>) -> DofPartition {
    classify_fields(grid, 1)
}

pub fn classify_fields<T: Real>(grid: &GridSpec<T>, n_fields: usize) -> DofPartition {
    let n = grid.nodes();
    let mut part = DofPartition {
        unknown: Vec::new(),
        boundary: Vec::new(),
        initial: Vec::new(),
        kinds: Vec::with_capacity(n * n_fields),
        position: Vec::with_capacity(n * n_fields),
    };
    for field in 0..n_fields {
        for local in 0..n {
            let global = field * n + local;
            let (kx, kt) = grid.unflat(local);
            let kind = node_kind(grid.nx, kx, kt);
            let set = match kind {
                DofKind::Unknown => &mut part.unknown,
                DofKind::Boundary => &mut part.boundary,
                DofKind::Initial => &mut part.initial,
            };
            part.position.push(set.len());
            set.push(global);
            part.kinds.push(kind);
        }
    }
    debug_assert_eq!(part.unknown.len() + part.boundary.len() + part.initial.len(), n * n_fields);
    part
}

/// Values of `state` at the indices of `set`.
pub fn gather<T: Copy>(state: &[T], set: &[usize]) -> Result<Vec<T>> {
    set.iter()
        .map(|&i| state.get(i).copied().ok_or(Error::IndexOutOfRange { index: i, len: state.len() }))
        .collect()
}

/// Write `values` into `state` at the indices of `set`; other entries are
/// untouched.
pub fn scatter<T: Copy>(state: &mut [T], set: &[usize], values: &[T]) -> Result<()> {
    if set.len() != values.len() {
        return Err(Error::DimensionMismatch { expected: set.len(), got: values.len() });
    }
    let len = state.len();
    if let Some(&bad) = set.iter().find(|&&i| i >= len) {
        return Err(Error::IndexOutOfRange { index: bad, len });
    }
    for (&i, &v) in set.iter().zip(values) {
        state[i] = v;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn burgers_grid_dimensions() {
        let g = build_grid((-1.0f64, 1.0), 0.5, 3, 6, 4).unwrap();
        assert_eq!((g.nx, g.nt), (49, 33));
        assert!((g.dx - 1.0 / 24.0).abs() < 1e-15);
        let s = build_grid((0.0, 1.0), 0.2, 4, 6, 6).unwrap();
        assert_eq!((s.nx, s.nt), (97, 97));
        let small = build_grid((0.0, 1.0), 1.0, 1, 4, 4).unwrap();
        assert_eq!(small.nx, 9);
    }

    #[test]
    fn degenerate_domains_rejected() {
        assert!(build_grid((1.0, 1.0), 0.5, 3, 6, 4).is_err());
        assert!(build_grid((0.0, 1.0), 0.0, 3, 6, 4).is_err());
        assert!(build_grid((0.0, 1.0), 1.0, 3, 5, 4).is_err());
    }

    #[test]
    fn partition_counts() {
        // nx = 5, nt = 3 is not a dyadic grid, so count with node_kind directly
        let (nx, nt) = (5, 3);
        let mut counts = [0usize; 3];
        for kt in 0..nt {
            for kx in 0..nx {
                counts[node_kind(nx, kx, kt) as usize] += 1;
            }
        }
        assert_eq!(counts, [6, 4, 5]);
        assert_eq!(node_kind(nx, 0, 0), DofKind::Initial);

        let g = build_grid((-1.0, 1.0), 0.5, 3, 6, 4).unwrap();
        let p = classify_dofs(&g);
        assert_eq!(p.unknown.len(), (g.nx - 2) * (g.nt - 1));
        assert_eq!(p.initial.len(), g.nx);
        assert_eq!(p.boundary.len(), 2 * (g.nt - 1));
    }

    #[test]
    fn multi_field_layout() {
        let g = build_grid((0.0, 1.0), 0.2, 2, 6, 6).unwrap();
        let p = classify_fields(&g, 3);
        let n = g.nodes();
        assert_eq!(p.total(), 3 * n);
        assert_eq!(p.kind(2 * n), DofKind::Initial);
        assert_eq!(p.kind(n + g.flat(0, 1)), DofKind::Boundary);
        assert!(p.unknown.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn scatter_gather_errors() {
        let mut s = vec![0.0; 4];
        assert!(scatter(&mut s, &[1, 7], &[1.0, 2.0]).is_err());
        assert!(scatter(&mut s, &[1], &[1.0, 2.0]).is_err());
        assert!(gather(&s, &[9]).is_err());
    }
}
