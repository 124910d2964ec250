//! Linearised semigroup transport and the inequality checks built on it.

mod checks;
mod report;
mod transport;

pub use checks::{
    check_cauchy_schwarz, check_conservation, check_contraction, check_order_bounds, duality_gap,
    forward_logsob_factor, gradient_estimate_check, gradient_sup, laplacian_commutation, lipschitz_constant,
    lipschitz_decay, local_logsob_check, reverse_logsob_factor, semigroup_law_gap, structural_suite, variance_identity,
    VarianceIdentity, K_ZERO, STRUCTURAL_TOL,
};
pub use report::{disc_tolerance, GridMeta, InequalityReport, REPORT_SCHEMA_VERSION};
pub use transport::{adjoint_sweep, transport, weighted_forward_sum, Direction, TransportPlan};
