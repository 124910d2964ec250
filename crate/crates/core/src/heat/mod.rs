//! Weighted Laplacian assembly, heat time stepping and the Bochner residual.

mod assembly;
mod bochner;
mod flow;

pub use assembly::{assemble, assemble_for_state, nonlinear_laplacian, weighted_laplacian, CgStats, DiffusionAssembly};
pub use bochner::{bochner_residual, BochnerReport};
pub use flow::{
    explicit_step_limit, heat_step, propagate, solve_heat_flow, HeatFlowOptions, PositivityViolation, Scheme,
    Trajectory, DEFAULT_CG_TOL,
};
