//! Li-Yau residuals on a weighted circle with a negative curvature bound.

use std::f64::consts::TAU;

use finsler_lab::geometry::{MeasureField, TorusGrid};
use finsler_lab::heat::{solve_heat_flow, HeatFlowOptions};
use finsler_lab::liyau::{residual_linear, residual_psi, LiYauProfile};
use finsler_lab::metric::{MetricField, NormDescriptor};

fn main() -> finsler_lab::Result<()> {
    let grid = TorusGrid::new(1, 128, 1.0)?;
    let metric = MetricField::uniform(grid, NormDescriptor::euclidean(1)?)?;
    // dm = exp(-f) dx with f = 0.2 cos(2 pi x); Ric_8 >= -0.2 (2 pi)^2
    let measure = MeasureField::from_log_density(grid, grid.sample(|x| 0.2 * (TAU * x[0]).cos()))?;
    let (n, k) = (8.0, -0.2 * TAU * TAU);
    let u0 = grid.sample(|x| 1.0 + 0.5 * (TAU * x[0] + 0.3).sin());
    let traj = solve_heat_flow(&metric, &measure, &u0, HeatFlowOptions::new(0.1 / 1638.0, 0.1))?;

    for t in [0.01, 0.05, 0.1] {
        let j = traj.index_at(t);
        println!("t = {:.3}", traj.time(j));
        for (label, p) in [("quadratic", LiYauProfile::Quadratic), ("li-xu", LiYauProfile::LiXu), ("sinh", LiYauProfile::Sinh { tau: 1.0 })] {
            let c = p.alpha_phi(k, n, traj.time(j))?;
            let r = residual_linear(&traj, j, c)?;
            println!("  {label:<10} alpha {:.4} phi {:>9.3}  {}", c.alpha, c.phi, r.summary());
        }
        for r in residual_psi(&traj, j, n, k)? {
            println!("  {}", r.summary());
        }
    }
    Ok(())
}
