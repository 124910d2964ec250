use std::f64::consts::TAU;

use finsler_lab::geometry::{MeasureField, TorusGrid};
use finsler_lab::heat::{heat_step, nonlinear_laplacian, solve_heat_flow, HeatFlowOptions, Scheme};
use finsler_lab::linalg::Sym2;
use finsler_lab::metric::{MetricField, NormDescriptor};
use finsler_lab::Error;
use proptest::prelude::*;

fn randers_setup(nodes: usize, b: [f64; 2]) -> (MetricField, MeasureField) {
    let grid = TorusGrid::new(2, nodes, 1.0).unwrap();
    let desc = NormDescriptor::randers(2, Sym2::IDENTITY, b).unwrap();
    let mu = MeasureField::busemann_hausdorff(grid, &desc);
    (MetricField::uniform(grid, desc).unwrap(), mu)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn flow_conserves_mass_and_keeps_bounds(
        bx in -0.4f64..0.4, amp in 0.05f64..0.8, kx in 1i32..3, ky in 0i32..3, phase in 0.0f64..TAU,
    ) {
        let (metric, mu) = randers_setup(24, [bx, 0.1]);
        let grid = *metric.grid();
        let u0 = grid.sample(|x| 1.0 + amp * (TAU * (kx as f64 * x[0] + ky as f64 * x[1]) + phase).cos());
        let traj = solve_heat_flow(&metric, &mu, &u0, HeatFlowOptions::new(1e-3, 5e-3)).unwrap();
        prop_assert!(traj.mass_drift() < 1e-10);
        let (lo, hi) = u0.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(*v), b.max(*v)));
        for k in 0..traj.len() {
            for v in traj.state(k) {
                prop_assert!(*v >= lo - 1e-12 && *v <= hi + 1e-12);
            }
        }
        prop_assert!(traj.positivity_violations().is_empty());
    }

    #[test]
    fn laplacian_integrates_to_zero(bx in -0.5f64..0.5, phase in 0.0f64..TAU) {
        let (metric, mu) = randers_setup(32, [bx, -0.2]);
        let grid = *metric.grid();
        let u = grid.sample(|x| (TAU * x[0] + phase).sin() + 0.5 * (TAU * x[1]).cos());
        let lap = nonlinear_laplacian(&metric, &mu, &u).unwrap();
        let scale = lap.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        prop_assert!(mu.integrate(&lap).abs() <= 1e-12 * scale);
    }
}

#[test]
fn euclidean_mode_decays_at_second_order() {
    let t_end = 0.02;
    let mut errors = Vec::new();
    for nodes in [32, 64, 128] {
        let grid = TorusGrid::new(1, nodes, 1.0).unwrap();
        let metric = MetricField::uniform(grid, NormDescriptor::euclidean(1).unwrap()).unwrap();
        let mu = MeasureField::lebesgue(grid);
        let u0 = grid.sample(|x| 1.0 + 0.5 * (TAU * x[0]).sin());
        let h = grid.spacing();
        let dt = t_end / (t_end / (h * h)).round();
        let traj = solve_heat_flow(&metric, &mu, &u0, HeatFlowOptions::new(dt, t_end)).unwrap();
        let decay = (-TAU * TAU * t_end).exp();
        let err = grid
            .sample(|x| 1.0 + 0.5 * decay * (TAU * x[0]).sin())
            .iter()
            .zip(traj.state(traj.last_index()))
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        errors.push(err);
    }
    for w in errors.windows(2) {
        let ratio = w[0] / w[1];
        assert!((3.2..4.8).contains(&ratio), "{errors:?}");
    }
}

#[test]
fn euler_and_crank_nicolson_gap_is_first_order_in_dt() {
    let (metric, mu) = randers_setup(16, [0.2, 0.0]);
    let grid = *metric.grid();
    let u0 = grid.sample(|x| 1.0 + 0.3 * (TAU * x[0]).cos());
    let gap = |dt: f64| {
        let a = solve_heat_flow(&metric, &mu, &u0, HeatFlowOptions::new(dt, 2e-3)).unwrap();
        let opts = HeatFlowOptions::new(dt, 2e-3).with_scheme(Scheme::CrankNicolson);
        let b = solve_heat_flow(&metric, &mu, &u0, opts).unwrap();
        a.state(a.last_index()).iter().zip(b.state(b.last_index())).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
    };
    let ratio = gap(1e-4) / gap(5e-5);
    assert!((1.7..2.3).contains(&ratio), "{ratio}");
}

#[test]
fn explicit_step_beyond_limit_is_refused() {
    let (metric, mu) = randers_setup(32, [0.1, 0.0]);
    let u0 = metric.grid().sample(|x| 1.0 + 0.1 * (TAU * x[0]).cos());
    assert!(matches!(heat_step(&metric, &mu, &u0, 1e-2, Scheme::Explicit), Err(Error::CflViolation { .. })));
}

#[test]
fn wrong_length_initial_datum_is_rejected() {
    let (metric, mu) = randers_setup(8, [0.1, 0.0]);
    assert!(matches!(
        solve_heat_flow(&metric, &mu, &[1.0; 3], HeatFlowOptions::new(1e-3, 1e-2)),
        Err(Error::InvalidGrid(_))
    ));
}

#[test]
fn constant_state_is_stationary() {
    let (metric, mu) = randers_setup(16, [0.3, 0.2]);
    let u0 = vec![2.5; metric.grid().len()];
    let traj = solve_heat_flow(&metric, &mu, &u0, HeatFlowOptions::new(1e-3, 1e-2)).unwrap();
    for v in traj.state(traj.last_index()) {
        assert!((v - 2.5).abs() < 1e-12);
    }
}
