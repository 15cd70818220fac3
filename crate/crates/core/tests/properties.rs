use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stwave::derivative::{DerivativeOperator, Direction};
use stwave::grid::{build_grid, classify_fields, gather, scatter};
use stwave::wavelet::{node_count, FieldGrid2D, Transform2D};

fn order() -> impl Strategy<Value = usize> {
    prop::sample::select(vec![4usize, 6, 8])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn synthesis_inverts_analysis(px in order(), pt in order(), j in 2usize..5, seed in any::<u64>()) {
        let n = node_count(j, px) * node_count(j, pt);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.5..0.5)).collect();
        let f = FieldGrid2D::from_values(j, px, pt, values).unwrap();
        let tr = Transform2D::<f64>::new(px, pt).unwrap();
        let back = tr.bwt_2d(&tr.fwt_2d(&f).unwrap()).unwrap();
        for (a, b) in f.values().iter().zip(back.values()) {
            prop_assert!((a - b).abs() <= 1e-13);
        }
    }

    #[test]
    fn first_derivative_exact_on_polynomials(
        p in order(),
        coeffs in prop::collection::vec(-1.0f64..1.0, 8),
        h in 0.05f64..0.5,
    ) {
        let n = 2 * p + 1;
        let op = DerivativeOperator::new(p, 1, Direction::X, n, h).unwrap();
        let deg = p - 1;
        let xs: Vec<f64> = (0..n).map(|k| (k as f64 - p as f64) * h).collect();
        let f: Vec<f64> = xs.iter().map(|x| (0..=deg).map(|d| coeffs[d] * x.powi(d as i32)).sum()).collect();
        let mut d = vec![0.0; n];
        op.apply_line(&f, &mut d);
        let scale: f64 = xs.iter().map(|x| x.abs()).fold(1.0, f64::max).powi(deg as i32) / h;
        for (x, v) in xs.iter().zip(&d) {
            let exact: f64 = (1..=deg).map(|k| k as f64 * coeffs[k] * x.powi(k as i32 - 1)).sum();
            prop_assert!((v - exact).abs() <= 1e-9 * scale, "{} vs {}", v, exact);
        }
    }

    #[test]
    fn scatter_then_gather_round_trips(fields in 1usize..4, j in 1usize..3, fill in -5.0f64..5.0) {
        let grid = build_grid((0.0, 1.0), 1.0, j, 4, 4).unwrap();
        let part = classify_fields(&grid, fields);
        let mut state = vec![0.0; part.total()];
        for set in [&part.unknown, &part.boundary, &part.initial] {
            let values: Vec<f64> = set.iter().map(|&i| fill + i as f64).collect();
            scatter(&mut state, set, &values).unwrap();
            prop_assert_eq!(gather(&state, set).unwrap(), values);
        }
        // the three sets cover every entry exactly once
        for (i, v) in state.iter().enumerate() {
            prop_assert_eq!(*v, fill + i as f64);
        }
    }
}
