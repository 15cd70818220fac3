//! Lagrange interpolation weights over an arbitrary field.

use crate::scalar::Field;

/// Values of the Lagrange cardinal polynomials through `nodes` at `x`.
pub fn weights<F: Field>(nodes: &[F], x: &F) -> Vec<F> {
    derivative_weights(nodes, x, 0)
}

/// `alpha`-th derivative of each Lagrange cardinal polynomial through
/// `nodes`, evaluated at `x`.
pub fn derivative_weights<F: Field>(nodes: &[F], x: &F, alpha: usize) -> Vec<F> {
    (0..nodes.len())
        .map(|i| {
            let mut poly = vec![F::one()];
            let mut denom = F::one();
            for (j, xj) in nodes.iter().enumerate() {
                if j == i {
                    continue;
                }
                poly = mul_linear(&poly, xj);
                denom = denom * (nodes[i].clone() - xj.clone());
            }
            let mut d = poly;
            for _ in 0..alpha {
                d = differentiate(&d);
            }
            eval(&d, x) / denom
        })
        .collect()
}

/// Multiply a coefficient vector (ascending powers) by `(x - root)`.
fn mul_linear<F: Field>(poly: &[F], root: &F) -> Vec<F> {
    let mut out = vec![F::zero(); poly.len() + 1];
    for (k, c) in poly.iter().enumerate() {
        out[k + 1] = out[k + 1].clone() + c.clone();
        out[k] = out[k].clone() - c.clone() * root.clone();
    }
    out
}

fn differentiate<F: Field>(poly: &[F]) -> Vec<F> {
    if poly.len() <= 1 {
        return vec![F::zero()];
    }
    poly.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c.clone() * F::from_i64(k as i64))
        .collect()
}

fn eval<F: Field>(poly: &[F], x: &F) -> F {
    poly.iter()
        .rev()
        .fold(F::zero(), |acc, c| acc * x.clone() + c.clone())
}

/// Integer nodes `start, start+1, ..., start+count-1` as field values.
pub fn integer_nodes<F: Field>(start: i64, count: usize) -> Vec<F> {
    (0..count as i64).map(|k| F::from_i64(start + k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn cubic_midpoint_weights() {
        let nodes: Vec<Rational> = [-3, -1, 1, 3].iter().map(|&v| Rational::from_i64(v)).collect();
        let w = weights(&nodes, &Rational::from_i64(0));
        let expect = [-1, 9, 9, -1].map(|n| Rational::from_ratio(n, 16));
        assert_eq!(w, expect.to_vec());
    }

    #[test]
    fn one_sided_first_derivative() {
        let nodes = integer_nodes::<Rational>(0, 4);
        let w = derivative_weights(&nodes, &Rational::from_i64(0), 1);
        let expect = vec![
            Rational::from_ratio(-11, 6),
            Rational::from_i64(3),
            Rational::from_ratio(-3, 2),
            Rational::from_ratio(1, 3),
        ];
        assert_eq!(w, expect);
    }

    #[test]
    fn linear_midpoint() {
        let nodes = integer_nodes::<f64>(0, 2);
        assert_eq!(weights(&nodes, &0.5), vec![0.5, 0.5]);
    }
}
