//! Structural properties of the linearised semigroup along a Randers flow,
//! followed by the gradient, local log-Sobolev and Lipschitz estimates.

use std::f64::consts::TAU;

use finsler_lab::experiments::random_fields;
use finsler_lab::geometry::{ricci_lower_bound, DimensionParam, MeasureField, TorusGrid};
use finsler_lab::heat::{solve_heat_flow, HeatFlowOptions};
use finsler_lab::linalg::Sym2;
use finsler_lab::metric::{MetricField, NormDescriptor};
use finsler_lab::semigroup::{
    gradient_estimate_check, lipschitz_decay, local_logsob_check, structural_suite, TransportPlan,
};

fn main() -> finsler_lab::Result<()> {
    let grid = TorusGrid::new(2, 48, 1.0)?;
    let desc = NormDescriptor::randers(2, Sym2::IDENTITY, [0.3, 0.0])?;
    let metric = MetricField::uniform(grid, desc)?;
    let measure = MeasureField::busemann_hausdorff(grid, &desc);
    let u0 = grid.sample(|x| 1.0 + 0.5 * (TAU * x[0] + 0.3).sin() * (TAU * x[1]).cos());
    let traj = solve_heat_flow(&metric, &measure, &u0, HeatFlowOptions::new(4e-4, 0.008))?;
    let k = ricci_lower_bound(&metric, &measure, DimensionParam::Infinite)?.k;
    let last = traj.last_index();

    let fields = random_fields(&grid, 42, 2);
    for r in structural_suite(&traj, 0, last / 2, last, &fields[0], &fields[1], 1e-12)? {
        println!("{}", r.summary());
    }
    let plan = TransportPlan::forward(last / 2, last);
    for r in gradient_estimate_check(&traj, plan, k)? {
        println!("{}", r.summary());
    }
    for r in local_logsob_check(&traj, plan, k)? {
        println!("{}", r.summary());
    }
    for r in lipschitz_decay(&traj, k)? {
        println!("{}", r.summary());
    }
    Ok(())
}
