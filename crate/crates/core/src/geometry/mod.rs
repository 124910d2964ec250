//! Torus grids, weighted measures, gradients, curvature bounds and distances.

mod curvature;
mod distance;
mod grid;
mod measure;

pub use curvature::{ricci_lower_bound, CurvatureBound, DimensionParam, Provenance};
pub use distance::{distances_from, finsler_distance};
pub use grid::TorusGrid;
pub use measure::{busemann_hausdorff_density, MeasureField};

use crate::error::Result;
use crate::linalg::Vec2;
use crate::metric::{MetricField, EPS_GRAD};

pub type ScalarField = Vec<f64>;
pub type VectorField = Vec<Vec2>;
pub type CovectorField = Vec<Vec2>;

/// Threshold below which a discrete gradient of `u` counts as zero.
pub fn gradient_threshold(grid: &TorusGrid, u: &[f64]) -> f64 {
    let scale = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    EPS_GRAD * scale.max(f64::MIN_POSITIVE) / grid.spacing()
}

/// Gradient vector field `grad u = L*(du)`; degenerate nodes get zero.
/// Also returns the number of degenerate nodes.
pub fn gradient_field(metric: &MetricField, u: &[f64]) -> Result<(VectorField, usize)> {
    let grid = metric.grid();
    let du = grid.differential(u);
    let thr = gradient_threshold(grid, u);
    let mut degenerate = 0;
    let mut out = Vec::with_capacity(du.len());
    for (i, xi) in du.iter().enumerate() {
        let desc = metric.at(i);
        if desc.dual_norm(*xi) <= thr {
            degenerate += 1;
            out.push([0.0, 0.0]);
        } else {
            out.push(desc.legendre(*xi)?);
        }
    }
    Ok((out, degenerate))
}

/// `F*(du)^2 = F(grad u)^2` at every node.
pub fn gradient_norm_sq(metric: &MetricField, u: &[f64]) -> ScalarField {
    let du = metric.grid().differential(u);
    du.iter().enumerate().map(|(i, xi)| metric.at(i).dual_norm(*xi).powi(2)).collect()
}

/// `u F^2(grad log u) = F*(du)^2 / u` at every node.
pub fn log_gradient_energy(metric: &MetricField, u: &[f64]) -> ScalarField {
    gradient_norm_sq(metric, u).iter().zip(u).map(|(g, v)| g / v).collect()
}

/// `F^2(grad log u) = F*(du)^2 / u^2` at every node.
pub fn log_gradient_sq(metric: &MetricField, u: &[f64]) -> ScalarField {
    gradient_norm_sq(metric, u).iter().zip(u).map(|(g, v)| g / (v * v)).collect()
}

/// `sum_i field_i * sigma_i`.
pub fn integrate(field: &[f64], measure: &MeasureField) -> f64 {
    measure.integrate(field)
}
