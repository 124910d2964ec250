//! Li-Yau coefficients, the `Psi_t` profile and inequality residuals.

pub mod entropy;
pub mod profile;
pub mod psi;
pub mod residual;

pub use entropy::{check_exp_uu, check_log_sob_weak, entropy_profile, weak_chi, EntropyProfile, MIN_RATIO};
pub use profile::{sine_closed_form, sinh_closed_form, LiYauCoefficients, LiYauProfile};
pub use psi::{sinc_w, tau_lambda, zcot, zcot_derivative, PsiEvaluator, PsiRoots, SERIES_WINDOW};
pub use residual::{residual_linear, residual_psi, GaussianKernel};
