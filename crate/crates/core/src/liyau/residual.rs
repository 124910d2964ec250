use crate::error::{Error, Result};
use crate::geometry::log_gradient_sq;
use crate::heat::Trajectory;
use crate::linalg::Vec2;
use crate::liyau::profile::LiYauCoefficients;
use crate::liyau::psi::PsiEvaluator;
use crate::metric::NormDescriptor;
use crate::semigroup::{disc_tolerance, InequalityReport, K_ZERO};

fn require_positive_time(traj: &Trajectory, k: usize) -> Result<f64> {
    if k == 0 || k > traj.last_index() {
        return Err(Error::IndexRange(format!("Li-Yau residual needs 0 < k <= {}, got {k}", traj.last_index())));
    }
    Ok(traj.time(k))
}

/// `F^2(grad log u) - alpha d_t log u <= phi` at time index `k`.
pub fn residual_linear(traj: &Trajectory, k: usize, coeffs: LiYauCoefficients) -> Result<InequalityReport> {
    let t = require_positive_time(traj, k)?;
    let g = log_gradient_sq(traj.metric(), traj.state(k));
    let dt_log = traj.log_time_derivative(k);
    let lhs: Vec<f64> = g.iter().zip(&dt_log).map(|(g, d)| g - coeffs.alpha * d).collect();
    let rhs = vec![coeffs.phi; lhs.len()];
    Ok(InequalityReport::relative("li-yau-linear", lhs, rhs, disc_tolerance(traj), 0.0)
        .with_grid(traj)
        .with_param("t", t)
        .with_param("alpha", coeffs.alpha)
        .with_param("phi", coeffs.phi))
}

/// `F^2(grad log u) <= (N/2) Psi_t(4 d_t log u / (N K))`, preceded by the bound
/// `4 d_t log u / (N K) < 1 + pi^2 / (K^2 t^2)`. At `K = 0` the single report is
/// `F^2(grad log u) - d_t log u <= N / (2t)`.
pub fn residual_psi(traj: &Trajectory, k: usize, n: f64, curvature: f64) -> Result<Vec<InequalityReport>> {
    let t = require_positive_time(traj, k)?;
    if !(n.is_finite() && n > 0.0) {
        return Err(Error::InvalidDescriptor(format!("Psi-form residual needs finite N, got {n}")));
    }
    if curvature.abs() < K_ZERO {
        let coeffs = LiYauCoefficients { alpha: 1.0, phi: n / (2.0 * t) };
        let mut r = residual_linear(traj, k, coeffs)?;
        r.name = "li-yau-sharp".into();
        return Ok(vec![r.with_param("N", n).with_param("K", 0.0)]);
    }
    let psi = PsiEvaluator::new(n, curvature, t)?;
    let g = log_gradient_sq(traj.metric(), traj.state(k));
    let chi: Vec<f64> = traj.log_time_derivative(k).iter().map(|d| psi.chi_of(*d)).collect();
    let limit = psi.upper_limit();
    let bound = InequalityReport::new("chi-bound", chi.clone(), vec![limit; chi.len()], 0.0)
        .with_grid(traj)
        .with_param("t", t);
    // nodes past the limit get a NaN bound and count as violations
    let rhs: Vec<f64> = chi.iter().map(|c| psi.value(*c).map(|v| 0.5 * n * v).unwrap_or(f64::NAN)).collect();
    let form = InequalityReport::relative("li-yau-psi", g, rhs, disc_tolerance(traj), 0.0)
        .with_grid(traj)
        .with_param("t", t)
        .with_param("N", n)
        .with_param("K", curvature);
    Ok(vec![bound, form])
}

#[derive(Clone, Copy, Debug)]
struct Dual {
    v: f64,
    d: f64,
}

impl Dual {
    fn cst(v: f64) -> Self {
        Dual { v, d: 0.0 }
    }
    fn var(v: f64) -> Self {
        Dual { v, d: 1.0 }
    }
    fn mul(self, o: Dual) -> Dual {
        Dual { v: self.v * o.v, d: self.d * o.v + self.v * o.d }
    }
    fn div(self, o: Dual) -> Dual {
        Dual { v: self.v / o.v, d: (self.d * o.v - self.v * o.d) / (o.v * o.v) }
    }
    fn exp(self) -> Dual {
        let e = self.v.exp();
        Dual { v: e, d: e * self.d }
    }
    fn ln(self) -> Dual {
        Dual { v: self.v.ln(), d: self.d / self.v }
    }
    fn powf(self, p: f64) -> Dual {
        Dual { v: self.v.powf(p), d: p * self.v.powf(p - 1.0) * self.d }
    }
}

/// Heat kernel `(4 pi t)^{-n/2} exp(-|x|^2 / (4t))` on flat space.
#[derive(Clone, Copy, Debug)]
pub struct GaussianKernel {
    pub dim: usize,
}

impl GaussianKernel {
    fn log_u(&self, t: Dual, x: [Dual; 2]) -> Dual {
        let r2 = (0..self.dim).fold(Dual::cst(0.0), |acc, i| {
            let sq = x[i].mul(x[i]);
            Dual { v: acc.v + sq.v, d: acc.d + sq.d }
        });
        let four_pi_t = Dual::cst(4.0 * std::f64::consts::PI).mul(t);
        let pre = four_pi_t.powf(-0.5 * self.dim as f64);
        let gauss = Dual { v: -r2.v, d: -r2.d }.div(Dual::cst(4.0).mul(t)).exp();
        pre.mul(gauss).ln()
    }

    pub fn value(&self, t: f64, x: Vec2) -> f64 {
        self.log_u(Dual::cst(t), [Dual::cst(x[0]), Dual::cst(x[1])]).v.exp()
    }

    /// `d_t log u` by forward-mode differentiation.
    pub fn log_time_derivative(&self, t: f64, x: Vec2) -> f64 {
        self.log_u(Dual::var(t), [Dual::cst(x[0]), Dual::cst(x[1])]).d
    }

    /// `grad log u` (Euclidean, so equal to `d log u`).
    pub fn log_gradient(&self, t: f64, x: Vec2) -> Vec2 {
        let mut out = [0.0; 2];
        for (i, o) in out.iter_mut().enumerate().take(self.dim) {
            let mut xs = [Dual::cst(x[0]), Dual::cst(x[1])];
            xs[i] = Dual::var(x[i]);
            *o = self.log_u(Dual::cst(t), xs).d;
        }
        out
    }

    /// `F^2(grad log u) - d_t log u - n / (2t)`, zero in exact arithmetic.
    pub fn sharp_residual(&self, t: f64, x: Vec2) -> f64 {
        let f = NormDescriptor::Euclidean { dim: self.dim }.norm(self.log_gradient(t, x));
        f * f - self.log_time_derivative(t, x) - self.dim as f64 / (2.0 * t)
    }
}
