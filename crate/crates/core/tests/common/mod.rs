use stwave::assembly::Discrete;

/// Largest deviation between central differences of the residual and the
/// tangent columns `cols`, relative to `||K||_inf`.
pub fn column_error<D: Discrete<f64>>(p: &D, state: &[f64], cols: &[usize], eps: f64) -> f64 {
    let k = p.tangent(state).unwrap();
    let kt = k.transpose();
    let scale = k.norm_inf();
    let mut worst = 0.0f64;
    for &c in cols {
        let mut plus = state.to_vec();
        let mut minus = state.to_vec();
        plus[c] += eps;
        minus[c] -= eps;
        let rp = p.residual(&plus).unwrap().values;
        let rm = p.residual(&minus).unwrap().values;
        let (rows, vals) = kt.row(c);
        let mut col = vec![0.0; rp.len()];
        for (&r, &v) in rows.iter().zip(vals) {
            col[r] = v;
        }
        for i in 0..rp.len() {
            let fd = (rp[i] - rm[i]) / (2.0 * eps);
            worst = worst.max((fd - col[i]).abs() / scale);
        }
    }
    worst
}
