//! Bochner identity and its dimension-N inequality on a weighted flat torus,
//! under grid refinement.

use std::f64::consts::TAU;

use finsler_lab::geometry::{DimensionParam, MeasureField, TorusGrid};
use finsler_lab::heat::bochner_residual;
use finsler_lab::linalg::Sym2;
use finsler_lab::metric::{MetricField, NormDescriptor};

fn main() -> finsler_lab::Result<()> {
    let desc = NormDescriptor::riemannian(2, Sym2::new(1.0, 0.2, 1.3))?;
    for nodes in [32, 64, 128] {
        let grid = TorusGrid::new(2, nodes, 1.0)?;
        let metric = MetricField::uniform(grid, desc)?;
        let measure = MeasureField::from_log_density(grid, grid.sample(|x| 0.3 * (TAU * x[0]).cos()))?;
        // phases keep the critical points of u off the grid
        let u = grid.sample(|x| (TAU * x[0] + 0.1).sin() + 0.3 * (TAU * (x[0] + x[1]) + 0.2).cos());
        let r = bochner_residual(&metric, &measure, &u, DimensionParam::Finite(6.0))?;
        println!(
            "n = {nodes:>3}  max |residual| / scale {:.3e}  min slack / scale {:+.3e}",
            r.max_abs_residual / r.scale,
            r.min_slack.unwrap_or(f64::NAN) / r.scale
        );
    }
    Ok(())
}
