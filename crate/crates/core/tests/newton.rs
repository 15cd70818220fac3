use stwave::assembly::{BurgersSetup, Discrete, Domain, LevelFactory, SodSetup};
use stwave::newton::{newton_solve, recursive_solve, NewtonConfig, Outcome, RecursionPlan};
use stwave::problems::{BurgersSpec, ConditionSchedule, SodSpec};
use stwave::study::convergence_study;

fn walking() -> BurgersSetup<f64> {
    BurgersSetup {
        spec: BurgersSpec::walking(0.01, 1.0, -0.5),
        domain: Domain { x_lo: -1.0, x_hi: 1.0, t_end: 0.5, px: 6, pt: 4 },
    }
}

#[test]
fn uniform_sod_state_is_a_fixed_point() {
    let mut spec = SodSpec::default();
    spec.right = spec.left;
    let setup = SodSetup { spec, domain: Domain { x_lo: 0.0, x_hi: 1.0, t_end: 0.2, px: 6, pt: 6 } };
    let p = setup.at_level(2).unwrap();
    let targets = p.targets(0.01, 1.0).unwrap();
    // targets only cover initial and boundary nodes; fill the interior
    // with the same uniform state
    let n = p.grid().nodes();
    let guess: Vec<f64> = (0..3 * n).map(|i| targets[(i / n) * n]).collect();
    // the uniform state leaves only round-off in the residual
    let config = NewtonConfig { abs_tol: 1e-9, ..NewtonConfig::default() };
    let (state, report) = newton_solve(&p, &guess, &targets, &config).unwrap();
    assert_eq!(report.outcome, Outcome::Converged);
    assert_eq!(report.iterations, 0);
    assert_eq!(state, guess);
}

#[test]
fn walking_burgers_converges_from_zeros() {
    let p = walking().at_level(3).unwrap();
    let targets = p.targets(1.0, 1.0).unwrap();
    let zeros = vec![0.0; p.dofs()];
    let (state, report) = newton_solve(&p, &zeros, &targets, &NewtonConfig::default()).unwrap();
    assert!(report.converged(), "{:?}", report.outcome);
    assert!(report.iterations <= 12);
    let h = &report.residual_history;
    assert!(h.last().unwrap() < &(1e-6 * h[0]));
    // initial and boundary entries land exactly on their targets
    let part = stwave::grid::classify_dofs(p.grid());
    for &i in part.initial.iter().chain(&part.boundary) {
        assert_eq!(state[i], targets[i]);
    }
}

#[test]
fn repeated_solves_are_bitwise_identical() {
    let plan = RecursionPlan::single(3, ConditionSchedule::single(1.0));
    let config = NewtonConfig { seed: Some(9), ..NewtonConfig::default() };
    let a = recursive_solve(&walking(), &plan, &config).unwrap();
    let b = recursive_solve(&walking(), &plan, &config).unwrap();
    assert_eq!(a.state, b.state);
    assert_eq!(a.report.without_timings(), b.report.without_timings());
}

#[test]
fn iteration_cap_reports_divergence() {
    let plan = RecursionPlan::single(3, ConditionSchedule::single(1.0));
    let config = NewtonConfig { max_iterations: 1, ..NewtonConfig::default() };
    let out = recursive_solve(&walking(), &plan, &config).unwrap();
    assert!(matches!(out.report.outcome, Outcome::Diverged { .. }));
}

#[test]
fn study_levels_must_increase() {
    let config = NewtonConfig::default();
    assert!(convergence_study(&walking(), &[4, 3], &config).is_err());
    assert!(convergence_study(&walking(), &[], &config).is_err());
}
