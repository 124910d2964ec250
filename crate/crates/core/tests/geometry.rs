use std::f64::consts::TAU;

use finsler_lab::geometry::{
    distances_from, finsler_distance, ricci_lower_bound, DimensionParam, MeasureField, Provenance, TorusGrid,
};
use finsler_lab::linalg::Sym2;
use finsler_lab::metric::{MetricField, NormDescriptor};
use proptest::prelude::*;

fn randers_field(nodes: usize, b: [f64; 2]) -> MetricField {
    let grid = TorusGrid::new(2, nodes, 1.0).unwrap();
    MetricField::uniform(grid, NormDescriptor::randers(2, Sym2::IDENTITY, b).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn distance_satisfies_triangle_inequality(
        bx in -0.5f64..0.5, by in -0.3f64..0.3,
        a in 0usize..256, b in 0usize..256, c in 0usize..256,
    ) {
        let m = randers_field(16, [bx, by]);
        let da = distances_from(&m, a);
        let db = distances_from(&m, b);
        prop_assert!(da[c] <= da[b] + db[c] + 1e-12);
        prop_assert_eq!(da[a], 0.0);
    }

    #[test]
    fn reverse_metric_reverses_distance(bx in -0.5f64..0.5, a in 0usize..256, b in 0usize..256) {
        let m = randers_field(16, [bx, 0.1]);
        let desc = m.as_uniform().unwrap().reverse();
        let r = MetricField::uniform(*m.grid(), desc).unwrap();
        let fwd = finsler_distance(&m, a, b);
        let back = finsler_distance(&r, b, a);
        prop_assert!((fwd - back).abs() <= 1e-12 * fwd.max(1.0));
    }

    #[test]
    fn measure_integrates_constants_to_total_mass(c in 0.1f64..5.0, eps in 0.0f64..0.5) {
        let grid = TorusGrid::new(2, 32, 2.0).unwrap();
        let m = MeasureField::from_fn(grid, |x| eps * (TAU * x[0] / 2.0).sin()).unwrap();
        let ones = vec![c; grid.len()];
        prop_assert!((m.integrate(&ones) - c * m.total_mass()).abs() <= 1e-12 * c * m.total_mass());
    }
}

#[test]
fn randers_distance_is_asymmetric_along_drift() {
    let m = randers_field(32, [0.4, 0.0]);
    let g = *m.grid();
    let (p, q) = (g.index(0, 0), g.index(8, 0));
    let fwd = finsler_distance(&m, p, q);
    let back = finsler_distance(&m, q, p);
    // F(y) = |y| + b.y on the grid axis is exact
    assert!((fwd - 1.4 * 0.25).abs() < 1e-12, "{fwd}");
    assert!((back - 0.6 * 0.25).abs() < 1e-12, "{back}");
}

#[test]
fn busemann_hausdorff_density_matches_randers_formula() {
    let b = [0.3, -0.2];
    let desc = NormDescriptor::randers(2, Sym2::IDENTITY, b).unwrap();
    let grid = TorusGrid::new(2, 8, 1.0).unwrap();
    let m = MeasureField::busemann_hausdorff(grid, &desc);
    let expected = (1.0 - (b[0] * b[0] + b[1] * b[1])).powf(1.5);
    for d in m.density() {
        assert!((d - expected).abs() < 1e-12);
    }
}

#[test]
fn curvature_bound_for_constant_randers_is_zero() {
    let m = randers_field(16, [0.3, 0.0]);
    let mu = MeasureField::busemann_hausdorff(*m.grid(), m.as_uniform().unwrap());
    let c = ricci_lower_bound(&m, &mu, DimensionParam::Finite(2.0)).unwrap();
    assert_eq!(c.k, 0.0);
    assert_eq!(c.provenance, Provenance::Analytic);
}

#[test]
fn cosine_weight_bound_approaches_exact_minimum() {
    // f = eps cos(2 pi x): Ric_N = f'' - f'^2/(N-1), minimum at the cosine peak
    let (eps, n) = (0.2, 8.0);
    let grid = TorusGrid::new(1, 512, 1.0).unwrap();
    let metric = MetricField::uniform(grid, NormDescriptor::euclidean(1).unwrap()).unwrap();
    let mu = MeasureField::from_log_density(grid, grid.sample(|x| eps * (TAU * x[0]).cos())).unwrap();
    let c = ricci_lower_bound(&metric, &mu, DimensionParam::Finite(n)).unwrap();
    let exact = (0..100_000)
        .map(|i| {
            let x = i as f64 / 100_000.0;
            let d1 = -eps * TAU * (TAU * x).sin();
            let d2 = -eps * TAU * TAU * (TAU * x).cos();
            d2 - d1 * d1 / (n - 1.0)
        })
        .fold(f64::INFINITY, f64::min);
    assert!((c.k - exact).abs() < 1e-3 * exact.abs(), "{} vs {exact}", c.k);
    assert_eq!(c.provenance, Provenance::Discrete);
}

#[test]
fn dimension_below_manifold_dimension_is_rejected() {
    let m = randers_field(8, [0.1, 0.0]);
    let mu = MeasureField::lebesgue(*m.grid());
    assert!(ricci_lower_bound(&m, &mu, DimensionParam::Finite(1.5)).is_err());
}
