//! Composite Gauss–Legendre quadrature with panel doubling.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Nodes and weights of the `n`-point rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// `P_n(x)` and `P_n'(x)` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite rule for several integrands sharing the same abscissae.
pub struct Composite<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
    pub rel_tol: T,
    pub start_panels: usize,
    pub max_panels: usize,
}

impl<T: Real> Composite<T> {
    pub fn new(points: usize, rel_tol: T) -> Self {
        let (x, w) = gauss_legendre(points);
        Self {
            nodes: x.into_iter().map(T::lit).collect(),
            weights: w.into_iter().map(T::lit).collect(),
            rel_tol,
            start_panels: 8,
            max_panels: 1 << 14,
        }
    }

    fn panels<const K: usize>(&self, a: T, b: T, panels: usize, f: &impl Fn(T) -> [T; K]) -> [T; K] {
        let width = (b - a) / T::from_usize_lossy(panels);
        let half = width * T::lit(0.5);
        let mut acc = [T::zero(); K];
        for k in 0..panels {
            let mid = a + (T::from_usize_lossy(k) + T::lit(0.5)) * width;
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                let vals = f(mid + half * *x);
                for (a, v) in acc.iter_mut().zip(vals) {
                    *a += *w * half * v;
                }
            }
        }
        acc
    }

    /// Integrate a vector-valued integrand over `[a, b]`, doubling the panel
    /// count until every component changes by less than `rel_tol * scale`,
    /// where `scale` is the largest component magnitude.
    pub fn integrate<const K: usize>(&self, a: T, b: T, f: impl Fn(T) -> [T; K]) -> Result<[T; K]> {
        let mut panels = self.start_panels;
        let mut prev = self.panels(a, b, panels, &f);
        loop {
            panels *= 2;
            let next = self.panels(a, b, panels, &f);
            let scale = next.iter().fold(T::zero(), |m, v| m.max(v.abs()));
            let change = next.iter().zip(&prev).fold(T::zero(), |m, (x, y)| m.max((*x - *y).abs()));
            if change <= self.rel_tol * scale || scale == T::zero() {
                return Ok(next);
            }
            if panels >= self.max_panels {
                let achieved = (change / scale).to_f64().unwrap_or(f64::NAN);
                return Err(Error::Quadrature { achieved });
            }
            prev = next;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials() {
        let (x, w) = gauss_legendre(10);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        let m18: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert!((m18 - 2.0 / 19.0).abs() < 1e-14);
        let odd = gauss_legendre(7);
        assert!(odd.0[3].abs() < 1e-15);
    }

    #[test]
    fn composite_gaussian() {
        let q = Composite::<f64>::new(16, 1e-12);
        let [v] = q.integrate(-10.0, 10.0, |u| [(-u * u).exp()]).unwrap();
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }
}
