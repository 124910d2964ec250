use std::f64::consts::TAU;

use finsler_lab::geometry::{MeasureField, TorusGrid};
use finsler_lab::harnack::{
    harnack_bound, harnack_bound_flat, harnack_bound_lf, verify_circle_kernel, verify_harnack, CircleHeatKernel,
    HarnackMode, ThetaDescriptor,
};
use finsler_lab::heat::{solve_heat_flow, HeatFlowOptions};
use finsler_lab::liyau::LiYauProfile;
use finsler_lab::metric::{MetricField, NormDescriptor};
use finsler_lab::Error;
use proptest::prelude::*;

fn modes() -> [HarnackMode; 3] {
    [
        HarnackMode::Lf,
        HarnackMode::Integral { profile: LiYauProfile::Quadratic },
        HarnackMode::Integral { profile: LiYauProfile::LiXu },
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn bounds_exceed_one_and_grow_with_distance(
        n in 1.0f64..6.0, k in -1.0f64..0.0, t1 in 0.05f64..1.0, gap in 0.05f64..1.0, d in 0.0f64..2.0,
    ) {
        let t2 = t1 + gap;
        for mode in &modes()[..2] {
            let near = harnack_bound(mode, n, k, d, t1, t2).unwrap();
            let far = harnack_bound(mode, n, k, d + 0.5, t1, t2).unwrap();
            prop_assert!(near >= 1.0 && far >= near * (1.0 - 1e-9), "{mode:?} {near} {far}");
        }
    }

    #[test]
    fn conjugate_is_convex(n in 1.0f64..6.0, k in -1.0f64..1.0, t in 0.1f64..1.5, q in -8.0f64..-0.1) {
        let th = ThetaDescriptor::new(n, k, t).unwrap();
        let h = 0.05;
        let (a, b, c) = (th.conjugate(q - h).unwrap(), th.conjugate(q).unwrap(), th.conjugate(q + h).unwrap());
        prop_assert!(a + c - 2.0 * b >= -1e-8 * (1.0 + b.abs()));
    }

    #[test]
    fn circle_kernel_obeys_flat_bounds(x1 in 0.0f64..1.0, x2 in 0.0f64..1.0, t1 in 0.005f64..0.2, gap in 0.005f64..0.3) {
        let kernel = CircleHeatKernel::new(1.0, 0.0);
        for mode in &modes()[..2] {
            for s in verify_circle_kernel(&kernel, &[(x1, t1, x2, t1 + gap)], mode, 1.0).unwrap() {
                prop_assert!(s.slack >= -1e-8, "{s:?}");
            }
        }
    }
}

#[test]
fn lf_bound_reduces_to_flat_form() {
    for d in [0.0, 0.4, 1.5] {
        let a = harnack_bound_lf(3.0, 0.0, d, 0.2, 0.7).unwrap();
        assert!((a / harnack_bound_flat(3.0, d, 0.2, 0.7) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn negative_curvature_bound_exceeds_flat_bound() {
    for mode in modes() {
        let flat = harnack_bound(&mode, 2.0, 0.0, 0.5, 0.3, 0.9);
        let curved = harnack_bound(&mode, 2.0, -0.8, 0.5, 0.3, 0.9).unwrap();
        if let Ok(flat) = flat {
            assert!(curved >= flat, "{mode:?}");
        }
    }
}

#[test]
fn bad_times_and_distances_are_rejected() {
    assert!(matches!(harnack_bound_lf(2.0, 0.0, 0.1, 0.5, 0.5), Err(Error::IndexRange(_))));
    assert!(matches!(harnack_bound_lf(2.0, 0.0, -0.1, 0.2, 0.4), Err(Error::InvalidDescriptor(_))));
}

#[test]
fn solved_asymmetric_flow_satisfies_harnack() {
    let grid = TorusGrid::new(1, 128, 1.0).unwrap();
    let metric = MetricField::uniform(grid, NormDescriptor::asym_1d(1.3, 0.8).unwrap()).unwrap();
    let mu = MeasureField::lebesgue(grid);
    let u0 = grid.sample(|x| 1.0 + 0.6 * (TAU * x[0]).cos());
    let traj = solve_heat_flow(&metric, &mu, &u0, HeatFlowOptions::new(2.5e-4, 0.05)).unwrap();
    let (k1, k2) = (traj.index_at(0.01), traj.index_at(0.05));
    for (x1, x2) in [(0, 0), (10, 40), (64, 3), (100, 127)] {
        for mode in &modes()[..2] {
            let (report, sample) = verify_harnack(&traj, x1, k1, x2, k2, mode, 1.0, 0.0, 1e-3).unwrap();
            assert!(report.passed(), "{sample:?}");
        }
    }
    assert!(verify_harnack(&traj, 0, k2, 1, k1, &HarnackMode::Lf, 1.0, 0.0, 1e-3).is_err());
}
