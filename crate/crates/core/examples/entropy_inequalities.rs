//! Entropy along the flow: the production formula and the exponential
//! log-Sobolev type inequalities tested against a weight.

use std::f64::consts::TAU;

use finsler_lab::geometry::{MeasureField, TorusGrid};
use finsler_lab::heat::{solve_heat_flow, HeatFlowOptions};
use finsler_lab::liyau::{check_exp_uu, check_log_sob_weak, entropy_profile};
use finsler_lab::metric::{MetricField, NormDescriptor};

fn main() -> finsler_lab::Result<()> {
    let grid = TorusGrid::new(1, 128, 1.0)?;
    let metric = MetricField::uniform(grid, NormDescriptor::euclidean(1)?)?;
    let u0 = grid.sample(|x| 1.0 + 0.5 * (TAU * x[0] + 0.3).sin());
    let phi = grid.sample(|x| 1.0 + 0.5 * (TAU * x[0]).cos());

    let flat = MeasureField::lebesgue(grid);
    let traj = solve_heat_flow(&metric, &flat, &u0, HeatFlowOptions::new(1e-4, 0.05))?;
    let last = traj.last_index();
    let prof = entropy_profile(&traj, last, &phi)?;
    println!("entropy production: relative gap {:.3e}", prof.relative_gap);
    for j in (0..prof.h.len()).step_by(100) {
        println!("  sigma {:.3}  H {:.8}", prof.times[j], prof.h[j]);
    }
    for r in check_exp_uu(&traj, last / 2, last, &phi, 1.0)? {
        println!("{}", r.summary());
    }

    let weighted = MeasureField::from_log_density(grid, grid.sample(|x| 0.2 * (TAU * x[0]).cos()))?;
    let traj = solve_heat_flow(&metric, &weighted, &u0, HeatFlowOptions::new(1e-4, 0.05))?;
    for r in check_log_sob_weak(&traj, last / 2, last, &phi, -0.2 * TAU * TAU, 8.0)? {
        println!("{}", r.summary());
    }
    Ok(())
}
