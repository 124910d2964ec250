//! Heat flow for a constant Randers norm with its Busemann-Hausdorff measure.

use std::f64::consts::TAU;

use finsler_lab::geometry::{MeasureField, TorusGrid};
use finsler_lab::heat::{solve_heat_flow, HeatFlowOptions};
use finsler_lab::linalg::Sym2;
use finsler_lab::metric::{MetricField, NormDescriptor};

fn main() -> finsler_lab::Result<()> {
    let grid = TorusGrid::new(2, 64, 1.0)?;
    let desc = NormDescriptor::randers(2, Sym2::IDENTITY, [0.3, 0.0])?;
    let metric = MetricField::uniform(grid, desc)?;
    let measure = MeasureField::busemann_hausdorff(grid, &desc);
    let u0 = grid.sample(|x| 1.0 + 0.5 * (TAU * x[0] + 0.3).sin() * (TAU * x[1]).cos());

    let traj = solve_heat_flow(&metric, &measure, &u0, HeatFlowOptions::new(2.5e-4, 0.02))?;

    for k in (0..traj.len()).step_by(20) {
        let u = traj.state(k);
        let (lo, hi) = u.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(*v), b.max(*v)));
        println!("t = {:.4}  min {:.6}  max {:.6}  mass {:.15}", traj.time(k), lo, hi, traj.mass(k));
    }
    let iters: usize = traj.cg_stats().iter().map(|s| s.iterations).sum();
    println!("relative mass drift {:.2e}", traj.mass_drift());
    println!("CG iterations {iters} over {} steps, non-monotone cells {}", traj.last_index(), traj.nonmonotone_cells());
    Ok(())
}
