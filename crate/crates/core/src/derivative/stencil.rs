//! Exact derivation of connection-coefficient stencils.
//!
//! For an interpolating scaling function the connection coefficients are
//! the values `phi^(alpha)(m)` at the integers. Differentiating the
//! two-scale relation `phi(x) = sum_k h_k phi(2x - k)` gives the finite
//! eigenproblem `v = 2^alpha H v` with `H[m][n] = h[2m - n]`; its solution
//! is unique up to scale, and the scale is fixed by requiring exactness on
//! `q^alpha`.

use crate::error::{Error, Result};
use crate::lagrange;
use crate::scalar::{Field, Rational};
use crate::wavelet::{check_order, refinement_mask};

/// Highest continuous derivative of the order-`p` scaling function.
pub fn continuity(p: usize) -> usize {
    match p {
        4 => 1,
        6 => 2,
        8 => 3,
        _ => 0,
    }
}

/// Support description of one interior stencil.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StencilSpec {
    pub p: usize,
    pub alpha: usize,
    pub half_width: usize,
}

pub fn check_pair(p: usize, alpha: usize) -> Result<()> {
    check_order(p)?;
    if alpha == 0 || alpha > 2 || alpha > continuity(p) {
        return Err(Error::UnsupportedDerivative { p, alpha });
    }
    Ok(())
}

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

/// Interior stencil `w` with `(D f)_i = sum_s w[s + h] f_{i+s}` for
/// `s = -h..=h`, plus its support spec.
pub fn interior_connection_coefficients(p: usize, alpha: usize) -> Result<(Vec<Rational>, StencilSpec)> {
    check_pair(p, alpha)?;
    let radius = p as i64 - 1;
    let size = (2 * radius + 1) as usize;
    let h = refinement_mask::<Rational>(p);
    let mask = |k: i64| -> Rational {
        if k.abs() > radius {
            Rational::from_i64(0)
        } else {
            h[(k + radius) as usize].clone()
        }
    };
    let lambda = Rational::from_ratio(1, 1 << alpha);
    // M = H - lambda I on indices m, n in -radius..=radius
    let mut m: Vec<Vec<Rational>> = (0..size)
        .map(|r| {
            (0..size)
                .map(|c| {
                    let mi = r as i64 - radius;
                    let ni = c as i64 - radius;
                    let mut v = mask(2 * mi - ni);
                    if r == c {
                        v -= lambda.clone();
                    }
                    v
                })
                .collect()
        })
        .collect();
    let null = null_space(&mut m);
    if null.len() != 1 {
        return Err(Error::EigenSolve(null.len()));
    }
    let v = &null[0];
    // moment normalization: sum_m m^alpha v_m = (-1)^alpha alpha!
    let moment = v.iter().enumerate().fold(Rational::from_i64(0), |acc, (i, vi)| {
        let mi = Rational::from_i64(i as i64 - radius);
        let mut pw = Rational::from_i64(1);
        for _ in 0..alpha {
            pw *= mi.clone();
        }
        acc + pw * vi.clone()
    });
    if moment == Rational::from_i64(0) {
        return Err(Error::EigenSolve(0));
    }
    let sign = if alpha.is_multiple_of(2) { 1 } else { -1 };
    let scale = Rational::from_i64(sign * factorial(alpha)) / moment;
    // stencil offset s multiplies f_{i+s} and equals v_{-s}
    let full: Vec<Rational> = (0..size).rev().map(|i| v[i].clone() * scale.clone()).collect();
    let zero = Rational::from_i64(0);
    let mut half_width = radius as usize;
    while half_width > 0 && full[radius as usize - half_width] == zero && full[radius as usize + half_width] == zero {
        half_width -= 1;
    }
    let lo = radius as usize - half_width;
    let stencil = full[lo..=radius as usize + half_width].to_vec();
    Ok((stencil, StencilSpec { p, alpha, half_width }))
}

/// One-sided closures for the first `half_width` rows: row `i` holds the
/// `alpha`-th derivative at node `i` of the Lagrange interpolant through
/// nodes `0..p`.
pub fn boundary_closures(p: usize, alpha: usize) -> Result<Vec<Vec<Rational>>> {
    let (_, spec) = interior_connection_coefficients(p, alpha)?;
    let nodes = lagrange::integer_nodes::<Rational>(0, p);
    Ok((0..spec.half_width)
        .map(|i| lagrange::derivative_weights(&nodes, &Rational::from_i64(i as i64), alpha))
        .collect())
}

/// Null space basis of a square matrix by exact row reduction. The matrix
/// is overwritten with its reduced row echelon form.
fn null_space<F: Field>(a: &mut [Vec<F>]) -> Vec<Vec<F>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| a[i][c] != F::zero()) else {
            continue;
        };
        a.swap(r, piv);
        let inv = F::one() / a[r][c].clone();
        for k in c..cols {
            a[r][k] = a[r][k].clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && a[i][c] != F::zero() {
                let f = a[i][c].clone();
                for k in c..cols {
                    let delta = f.clone() * a[r][k].clone();
                    a[i][k] = a[i][k].clone() - delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![F::zero(); cols];
            v[fc] = F::one();
            for (pr, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[pr][fc].clone();
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn p4_first_derivative_is_antisymmetric() {
        let (w, spec) = interior_connection_coefficients(4, 1).unwrap();
        assert_eq!(spec.half_width, 2);
        assert_eq!(w, vec![r(1, 12), r(-2, 3), r(0, 1), r(2, 3), r(-1, 12)]);
    }

    #[test]
    fn exact_on_monomials() {
        for (p, alpha) in [(4, 1), (6, 1), (6, 2), (8, 1), (8, 2)] {
            let (w, spec) = interior_connection_coefficients(p, alpha).unwrap();
            let h = spec.half_width as i64;
            for m in 0..p as u32 {
                // derivative of s^m at s = 0
                let got = w.iter().enumerate().fold(r(0, 1), |acc, (k, wk)| {
                    acc + wk * Rational::from_i64((k as i64 - h).pow(m))
                });
                let expect = if m as usize == alpha { Rational::from_i64(factorial(alpha)) } else { r(0, 1) };
                assert_eq!(got, expect, "p={p} alpha={alpha} m={m}");
            }
        }
    }

    #[test]
    fn symmetry_by_parity() {
        for (p, alpha) in [(6, 1), (6, 2), (8, 1), (8, 2)] {
            let (w, _) = interior_connection_coefficients(p, alpha).unwrap();
            let n = w.len();
            for k in 0..n {
                let mirrored = if alpha == 1 { -w[n - 1 - k].clone() } else { w[n - 1 - k].clone() };
                assert_eq!(w[k], mirrored);
            }
        }
    }

    #[test]
    fn table_constraints_enforced() {
        assert!(matches!(interior_connection_coefficients(4, 2), Err(Error::UnsupportedDerivative { .. })));
        assert!(matches!(interior_connection_coefficients(6, 0), Err(Error::UnsupportedDerivative { .. })));
        assert!(matches!(interior_connection_coefficients(8, 3), Err(Error::UnsupportedDerivative { .. })));
        assert!(matches!(interior_connection_coefficients(5, 1), Err(Error::UnsupportedOrder(5))));
    }

    #[test]
    fn p4_row0_closure() {
        let rows = boundary_closures(4, 1).unwrap();
        assert_eq!(rows[0], vec![r(-11, 6), r(3, 1), r(-3, 2), r(1, 3)]);
        for row in &rows {
            assert_eq!(row.iter().fold(r(0, 1), |a, b| a + b), r(0, 1));
        }
    }
}
