//! Harnack bounds from the Li-Yau inequalities and their verification.

mod bounds;
mod theta;
mod verify;

pub use bounds::{harnack_bound, harnack_bound_flat, harnack_bound_integral, harnack_bound_lf, HarnackMode};
pub use theta::ThetaDescriptor;
pub use verify::{verify_circle_kernel, verify_harnack, CircleHeatKernel, HarnackSample};
