mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use common::column_error;
use stwave::assembly::{reduce_to_u, BurgersDiscrete, Discrete, SodDiscrete};
use stwave::grid::{build_grid, classify_dofs, classify_fields};
use stwave::problems::{BurgersSpec, SodSpec};

#[test]
fn burgers_jacobian_matches_central_differences() {
    let grid = build_grid((-1.0, 1.0), 0.5, 3, 6, 4).unwrap();
    let spec = BurgersSpec::walking(0.01, 1.0, -0.5);
    let p = BurgersDiscrete::new(spec, grid.clone()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let state: Vec<f64> = (0..grid.nodes()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let cols: Vec<usize> = (0..50).map(|_| rng.gen_range(0..grid.nodes())).collect();
    let err = column_error(&p, &state, &cols, 1e-6);
    assert!(err < 1e-6, "relative column error {err}");
}

#[test]
fn burgers_time_term_only() {
    let grid = build_grid((-1.0, 1.0), 0.5, 2, 6, 4).unwrap();
    let mut spec = BurgersSpec::steepening(1.0);
    spec.nu = 1e-300;
    let p = BurgersDiscrete::new(spec, grid.clone()).unwrap();
    let k = p.tangent(&vec![0.0; grid.nodes()]).unwrap();
    for kt in 0..grid.nt {
        for kx in 0..grid.nx {
            let row = grid.flat(kx, kt);
            let (start, w) = p.ops.dt.row(kt);
            for m in 0..grid.nt {
                let expect: f64 = if m >= start && m < start + w.len() { w[m - start] } else { 0.0 };
                assert!((k.get(row, grid.flat(kx, m)) - expect).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn sod_jacobian_all_blocks() {
    let grid = build_grid((0.0, 1.0), 0.2, 3, 6, 6).unwrap();
    let spec = SodSpec::default();
    let p = SodDiscrete::new(spec, grid.clone()).unwrap();
    let n = grid.nodes();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut state = vec![0.0; 3 * n];
    for i in 0..n {
        state[i] = rng.gen_range(0.2..1.0);
        state[n + i] = rng.gen_range(-0.5..0.5);
        state[2 * n + i] = rng.gen_range(1.5..3.0);
    }
    for block in 0..3 {
        let cols: Vec<usize> = (0..30).map(|_| block * n + rng.gen_range(0..n)).collect();
        let err = column_error(&p, &state, &cols, 1e-6);
        assert!(err < 1e-6, "column block {block}: {err}");
    }
}

#[test]
fn sod_has_eight_blocks() {
    let grid = build_grid((0.0, 1.0), 0.2, 3, 6, 6).unwrap();
    let p = SodDiscrete::new(SodSpec::default(), grid).unwrap();
    let k = p.pattern().unwrap();
    let counts = k.block_nnz().unwrap();
    assert_eq!(counts.iter().filter(|&&c| c > 0).count(), 8);
    assert_eq!(counts[2], 0);
}

#[test]
fn uniform_sod_state_has_zero_residual() {
    let grid = build_grid((0.0, 1.0), 0.2, 2, 6, 6).unwrap();
    let p = SodDiscrete::new(SodSpec::default(), grid.clone()).unwrap();
    let n = grid.nodes();
    let mut s = vec![0.7; 3 * n];
    s[n..2 * n].iter_mut().for_each(|v| *v = 0.0);
    assert!(p.residual(&s).unwrap().norm_inf < 1e-11);
}

#[test]
fn zero_state_zero_residual() {
    let grid = build_grid((-1.0, 1.0), 0.5, 2, 6, 4).unwrap();
    let p = BurgersDiscrete::new(BurgersSpec::walking(0.01, 1.0, -0.5), grid.clone()).unwrap();
    assert_eq!(p.residual(&vec![0.0; grid.nodes()]).unwrap().norm_inf, 0.0);
    let q = BurgersDiscrete::new(BurgersSpec::walking(1e-300, 0.0, 0.0), grid.clone()).unwrap();
    assert!(q.residual(&vec![0.3; grid.nodes()]).unwrap().norm_inf < 1e-12);
}

#[test]
fn reduction_matches_dense_partition() {
    let grid = build_grid((-1.0, 1.0), 0.5, 2, 6, 4).unwrap();
    let p = BurgersDiscrete::new(BurgersSpec::walking(0.01, 1.0, -0.5), grid.clone()).unwrap();
    let part = classify_dofs(&grid);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let state: Vec<f64> = (0..grid.nodes()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let k = p.tangent(&state).unwrap();
    let r = p.residual(&state).unwrap().values;
    let di: Vec<f64> = (0..part.initial.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let db: Vec<f64> = (0..part.boundary.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let (kuu, rhs) = reduce_to_u(&k, &r, &part, &di, &db, true).unwrap();
    let dense = k.to_dense();
    for (a, &ra) in part.unknown.iter().enumerate() {
        for (b, &cb) in part.unknown.iter().enumerate() {
            assert_eq!(kuu.get(a, b), dense[ra][cb]);
        }
        let mut expect = -r[ra];
        for (q, &ci) in part.initial.iter().enumerate() {
            expect -= dense[ra][ci] * di[q];
        }
        for (q, &cb) in part.boundary.iter().enumerate() {
            expect -= dense[ra][cb] * db[q];
        }
        assert!((rhs[a] - expect).abs() < 1e-12);
    }
    let (_, plain) = reduce_to_u(&k, &r, &part, &di, &db, false).unwrap();
    for (a, &ra) in part.unknown.iter().enumerate() {
        assert_eq!(plain[a], -r[ra]);
    }
    let multi = classify_fields(&grid, 3);
    assert_eq!(multi.total(), 3 * grid.nodes());
}
