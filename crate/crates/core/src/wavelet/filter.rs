//! Deslauriers–Dubuc prediction filters.

use crate::error::{Error, Result};
use crate::lagrange;
use crate::scalar::{to_real, Field, Rational, Real};

/// Supported basis orders.
pub const SUPPORTED_ORDERS: [usize; 3] = [4, 6, 8];

pub fn check_order(p: usize) -> Result<()> {
    if SUPPORTED_ORDERS.contains(&p) {
        Ok(())
    } else {
        Err(Error::UnsupportedOrder(p))
    }
}

/// Interior midpoint prediction weights for an even number of points `p`.
///
/// Entry `k` multiplies the coarse sample `c[i - p/2 + 1 + k]` when
/// predicting the odd sample between `c[i]` and `c[i + 1]`. No order check
/// is made, so `p = 2` yields linear interpolation.
pub fn midpoint_weights<F: Field>(p: usize) -> Vec<F> {
    assert!(p >= 2 && p.is_multiple_of(2), "prediction needs an even point count");
    let half = (p / 2) as i64;
    // nodes in half-grid units: -(p-1), ..., -1, 1, ..., p-1
    let nodes: Vec<F> = (0..p as i64).map(|k| F::from_i64(2 * (k - half) + 1)).collect();
    lagrange::weights(&nodes, &F::zero())
}

/// Prediction weights on the `count` coarse nodes `0..count` for the odd
/// point at coarse coordinate `pos + 1/2`.
pub fn one_sided_weights<F: Field>(count: usize, pos: usize) -> Vec<F> {
    let nodes = lagrange::integer_nodes::<F>(0, count);
    lagrange::weights(&nodes, &F::from_ratio(2 * pos as i64 + 1, 2))
}

/// Refinement mask `h` of the interpolating scaling function,
/// `phi(x) = sum_k h[k] phi(2x - k)`, indexed `k = -(p-1) ..= p-1`.
pub fn refinement_mask<F: Field>(p: usize) -> Vec<F> {
    let w = midpoint_weights::<F>(p);
    let half = (p / 2) as i64;
    let radius = p as i64 - 1;
    (-radius..=radius)
        .map(|k| {
            if k == 0 {
                F::one()
            } else if k % 2 == 0 {
                F::zero()
            } else {
                // fine point k/2 lies between coarse i and i+1 with i = (k-1)/2;
                // coarse node 0 carries weight index 0 - (i - half + 1)
                let i = (k - 1).div_euclid(2);
                let idx = -(i - half + 1);
                if (0..p as i64).contains(&idx) {
                    w[idx as usize].clone()
                } else {
                    F::zero()
                }
            }
        })
        .collect()
}

/// Prediction stencils for one basis order.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterBank<T> {
    order: usize,
    interior: Vec<T>,
    /// `left[b]` predicts odd point `b` from coarse nodes `0..p`.
    left: Vec<Vec<T>>,
}

impl FilterBank<Rational> {
    /// Exact rational weights.
    pub fn exact(p: usize) -> Result<Self> {
        check_order(p)?;
        let interior = midpoint_weights::<Rational>(p);
        let left = (0..p / 2 - 1).map(|b| one_sided_weights::<Rational>(p, b)).collect();
        Ok(Self { order: p, interior, left })
    }
}

impl<T: Real> FilterBank<T> {
    pub fn new(p: usize) -> Result<Self> {
        let exact = FilterBank::exact(p)?;
        Ok(Self {
            order: p,
            interior: exact.interior.iter().map(to_real).collect(),
            left: exact.left.iter().map(|r| r.iter().map(to_real).collect()).collect(),
        })
    }
}

impl<T: Field> FilterBank<T> {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn prediction_weights(&self) -> &[T] {
        &self.interior
    }

    /// One-sided stencils for the first `p/2 - 1` odd points. The last odd
    /// points use the same rows reversed.
    pub fn boundary_weights(&self) -> &[Vec<T>] {
        &self.left
    }

    /// Minimum admissible fine-sequence length.
    pub fn min_len(&self) -> usize {
        self.order + 1
    }

    /// Predict every odd sample from the coarse sequence.
    pub fn predict(&self, coarse: &[T], odd: &mut [T]) {
        let nc = coarse.len();
        let p = self.order;
        debug_assert_eq!(odd.len() + 1, nc);
        if nc < p {
            // too few coarse nodes for a full stencil: use all of them
            for (i, o) in odd.iter_mut().enumerate() {
                let w = one_sided_weights::<T>(nc, i);
                *o = dot(&w, coarse);
            }
            return;
        }
        let nb = p / 2 - 1;
        let m = nc - 1;
        for (i, o) in odd.iter_mut().enumerate() {
            *o = if i < nb {
                dot(&self.left[i], &coarse[..p])
            } else if i + nb >= m {
                let b = m - 1 - i;
                let row = &self.left[b];
                let base = &coarse[nc - p..];
                row.iter()
                    .rev()
                    .zip(base)
                    .fold(T::zero(), |acc, (w, c)| acc + w.clone() * c.clone())
            } else {
                dot(&self.interior, &coarse[i + 1 - p / 2..i + 1 + p / 2])
            };
        }
    }
}

fn dot<T: Field>(w: &[T], v: &[T]) -> T {
    w.iter()
        .zip(v)
        .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn p4_interior_weights() {
        let bank = FilterBank::exact(4).unwrap();
        assert_eq!(bank.prediction_weights(), &[r(-1, 16), r(9, 16), r(9, 16), r(-1, 16)]);
    }

    #[test]
    fn p2_is_linear() {
        assert_eq!(midpoint_weights::<Rational>(2), vec![r(1, 2), r(1, 2)]);
    }

    #[test]
    fn p6_symmetric_and_exact_for_quintic() {
        let w = midpoint_weights::<Rational>(6);
        let rev: Vec<_> = w.iter().rev().cloned().collect();
        assert_eq!(w, rev);
        let sum = w.iter().fold(Rational::from_i64(0), |a, b| a + b);
        assert_eq!(sum, Rational::from_i64(1));
        // nodes -5,-3,...,5 (half units), x^5 at 0 is 0
        let pred = w
            .iter()
            .zip([-5i64, -3, -1, 1, 3, 5])
            .fold(Rational::from_i64(0), |a, (wk, x)| a + wk * Rational::from_i64(x.pow(5)));
        assert_eq!(pred, Rational::from_i64(0));
    }

    #[test]
    fn rejects_odd_and_unsupported() {
        assert_eq!(FilterBank::<f64>::new(5), Err(Error::UnsupportedOrder(5)));
        assert_eq!(FilterBank::<f64>::new(10), Err(Error::UnsupportedOrder(10)));
        assert!(FilterBank::<f64>::new(2).is_err());
    }

    #[test]
    fn all_stencils_sum_to_one_and_reproduce_monomials() {
        for p in SUPPORTED_ORDERS {
            let bank = FilterBank::exact(p).unwrap();
            let one = Rational::from_i64(1);
            let s: Rational = bank.prediction_weights().iter().fold(Rational::from_i64(0), |a, b| a + b);
            assert_eq!(s, one);
            for b in 0..p / 2 - 1 {
                let row = &bank.boundary_weights()[b];
                for m in 0..p as u32 {
                    let pred = row.iter().enumerate().fold(Rational::from_i64(0), |a, (k, w)| {
                        a + w * Rational::from_i64((k as i64).pow(m))
                    });
                    let x = r(2 * b as i64 + 1, 2);
                    let mut exact = Rational::from_i64(1);
                    for _ in 0..m {
                        exact *= x.clone();
                    }
                    assert_eq!(pred, exact, "p={p} b={b} m={m}");
                }
            }
        }
    }

    #[test]
    fn mask_has_interpolating_structure() {
        let h = refinement_mask::<Rational>(4);
        // h_{-3..=3} = [-1/16, 0, 9/16, 1, 9/16, 0, -1/16]
        assert_eq!(
            h,
            vec![r(-1, 16), r(0, 1), r(9, 16), r(1, 1), r(9, 16), r(0, 1), r(-1, 16)]
        );
    }
}
