use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::liyau::profile::LiYauCoefficients;
use crate::numerics::{bisect, golden_max};

/// Window in `w = K^2 t^2 (x - 1)` where series replace the trigonometric forms.
pub const SERIES_WINDOW: f64 = 1e-3;

const ROOT_TOL: f64 = 1e-12;

// z cot z as a power series in w = z^2
const ZCOT: [f64; 8] = [
    1.0,
    -1.0 / 3.0,
    -1.0 / 45.0,
    -2.0 / 945.0,
    -1.0 / 4725.0,
    -2.0 / 93555.0,
    -1382.0 / 638_512_875.0,
    -4.0 / 18_243_225.0,
];

/// `z cot z` with `w = z^2`, continued by `z coth z` for `w < 0`.
pub fn zcot(w: f64) -> f64 {
    if w.abs() < SERIES_WINDOW {
        ZCOT.iter().rev().fold(0.0, |acc, c| acc * w + c)
    } else if w > 0.0 {
        let z = w.sqrt();
        z / z.tan()
    } else {
        let z = (-w).sqrt();
        z / z.tanh()
    }
}

/// `d/dw` of [`zcot`].
pub fn zcot_derivative(w: f64) -> f64 {
    if w.abs() < SERIES_WINDOW {
        let mut acc = 0.0;
        for (j, c) in ZCOT.iter().enumerate().skip(1).rev() {
            acc = acc * w + j as f64 * c;
        }
        acc
    } else if w > 0.0 {
        let z = w.sqrt();
        (1.0 / z.tan() - z / z.sin().powi(2)) / (2.0 * z)
    } else {
        let z = (-w).sqrt();
        let s = z.sinh();
        let tail = if s.is_finite() { z / (s * s) } else { 0.0 };
        -(1.0 / z.tanh() - tail) / (2.0 * z)
    }
}

/// `sin(sqrt w) / sqrt w`, continued by `sinh` for `w < 0`.
pub fn sinc_w(w: f64) -> f64 {
    if w.abs() < SERIES_WINDOW {
        1.0 - w / 6.0 + w * w / 120.0 - w * w * w / 5040.0
    } else if w > 0.0 {
        let z = w.sqrt();
        z.sin() / z
    } else {
        let z = (-w).sqrt();
        z.sinh() / z
    }
}

/// Evaluator for `Psi_t` at dimension `n`, curvature `k != 0` and time `t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsiEvaluator {
    pub n: f64,
    pub k: f64,
    pub t: f64,
}

/// Zeros of `Psi_t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum PsiRoots {
    /// `K < 0`: the single root in `(1, upper)`.
    One { chi0: f64 },
    /// `K > 0`: `chi1 < 0 < chi2`.
    Two { chi1: f64, chi2: f64 },
}

impl PsiEvaluator {
    pub fn new(n: f64, k: f64, t: f64) -> Result<Self> {
        if k == 0.0 || !k.is_finite() {
            return Err(Error::InvalidDescriptor(format!("Psi needs a finite nonzero curvature, got {k}")));
        }
        if !(t > 0.0) || !(n > 0.0) {
            return Err(Error::InvalidDescriptor(format!("Psi needs t > 0 and N > 0, got t={t}, N={n}")));
        }
        Ok(PsiEvaluator { n, k, t })
    }

    /// `1 + pi^2 / (K^2 t^2)`.
    pub fn upper_limit(&self) -> f64 {
        1.0 + PI * PI / (self.k * self.k * self.t * self.t)
    }

    fn w(&self, x: f64) -> Result<f64> {
        let limit = self.upper_limit();
        if !(x < limit) {
            return Err(Error::DomainError { x, limit });
        }
        Ok(self.k * self.k * self.t * self.t * (x - 1.0))
    }

    pub fn value(&self, x: f64) -> Result<f64> {
        let w = self.w(x)?;
        Ok(0.5 * self.k * (x - 2.0) + zcot(w) / self.t)
    }

    pub fn derivative(&self, x: f64) -> Result<f64> {
        let w = self.w(x)?;
        Ok(0.5 * self.k + self.k * self.k * self.t * zcot_derivative(w))
    }

    /// `Psi_t(x) - K x + 2K`.
    pub fn tilde(&self, x: f64) -> Result<f64> {
        Ok(self.value(x)? - self.k * x + 2.0 * self.k)
    }

    /// `(N/2) Psi_t(4 xi / (N K))`, the bound on `F^2(grad log u)` at `d_t log u = xi`.
    pub fn scaled(&self, xi: f64) -> Result<f64> {
        Ok(0.5 * self.n * self.value(self.chi_of(xi))?)
    }

    /// `chi = 4 xi / (N K)`.
    pub fn chi_of(&self, xi: f64) -> f64 {
        4.0 * xi / (self.n * self.k)
    }

    /// `xi = N K chi / 4`.
    pub fn xi_of(&self, chi: f64) -> f64 {
        0.25 * self.n * self.k * chi
    }

    fn no_root(&self) -> Error {
        Error::NoRoot(format!("Psi_t has no bracketed zero at K={}, t={}", self.k, self.t))
    }

    /// Point just inside the upper limit where `Psi_t` is negative.
    fn negative_near_limit(&self, from: f64) -> Result<f64> {
        let limit = self.upper_limit();
        let mut gap = limit - from;
        for _ in 0..200 {
            gap *= 0.5;
            let x = limit - gap;
            if x >= limit {
                break;
            }
            if self.value(x)? < 0.0 {
                return Ok(x);
            }
        }
        Err(self.no_root())
    }

    /// The zeros bounding the feasible interval. For `K > 0` they exist at every
    /// `t > 0`; `chi2 < 1` exactly when `t >= 2/K`.
    pub fn roots(&self) -> Result<PsiRoots> {
        let f = |x: f64| self.value(x).unwrap_or(f64::NEG_INFINITY);
        if self.k < 0.0 {
            let hi = self.negative_near_limit(1.0)?;
            let chi0 = bisect(f, 1.0, hi, ROOT_TOL).ok_or_else(|| self.no_root())?;
            return Ok(PsiRoots::One { chi0 });
        }
        // Psi(0) = K (coth(Kt) - 1) > 0
        if !(self.value(0.0)? > 0.0) {
            return Err(self.no_root());
        }
        let hi = self.negative_near_limit(0.0)?;
        let chi2 = bisect(f, 0.0, hi, ROOT_TOL * hi.abs().max(1.0)).ok_or_else(|| self.no_root())?;
        let mut lo = -1.0;
        while self.value(lo)? >= 0.0 {
            lo *= 2.0;
            if lo < -1e300 {
                return Err(self.no_root());
            }
        }
        let chi1 = bisect(f, lo, 0.0, ROOT_TOL * lo.abs().max(1.0)).ok_or_else(|| self.no_root())?;
        Ok(PsiRoots::Two { chi1, chi2 })
    }

    /// Maximum of `Psi_t` over `[chi1, chi2]` (positive curvature only).
    pub fn feasible_max(&self) -> Result<(f64, f64)> {
        match self.roots()? {
            PsiRoots::Two { chi1, chi2 } => {
                Ok(golden_max(|x| self.value(x).unwrap_or(f64::NEG_INFINITY), chi1, chi2, 1e-12))
            }
            PsiRoots::One { .. } => Err(Error::Unbounded(f64::INFINITY)),
        }
    }

    /// Tangent line at `x_bar` as Li-Yau coefficients:
    /// `alpha = (2/K) Psi'(x_bar)`, `phi = (N/2)(Psi(x_bar) - x_bar Psi'(x_bar))`.
    pub fn linearize(&self, x_bar: f64) -> Result<LiYauCoefficients> {
        let v = self.value(x_bar)?;
        let d = self.derivative(x_bar)?;
        Ok(LiYauCoefficients { alpha: 2.0 / self.k * d, phi: 0.5 * self.n * (v - x_bar * d) })
    }

    /// Tangent point whose linearization is the sine (`tau^2 = K^2 (x - 1)`) or
    /// sinh (`tau^2 = K^2 (1 - x)`) profile with rate `tau`.
    pub fn tangent_point(&self, tau: f64, sine: bool) -> f64 {
        let r = tau * tau / (self.k * self.k);
        if sine {
            1.0 + r
        } else {
            1.0 - r
        }
    }

    /// Davies tangent for `K < 0`: with `kappa = -K`,
    /// `Psi_t(x) <= -(alpha kappa / 2) x + alpha^2 / t + kappa alpha^2 / (2 (alpha - 1))`.
    pub fn davies_bound(&self, alpha: f64, x: f64) -> Result<f64> {
        if !(self.k < 0.0) || !(alpha > 1.0) {
            return Err(Error::InvalidDescriptor(format!(
                "Davies tangent needs K < 0 and alpha > 1, got K={}, alpha={alpha}",
                self.k
            )));
        }
        let kappa = -self.k;
        Ok(-0.5 * alpha * kappa * x + alpha * alpha / self.t + kappa * alpha * alpha / (2.0 * (alpha - 1.0)))
    }

    /// `sin(Kt sqrt(chi - 1)) / (K sqrt(chi - 1))`, continued by `sinh` below `chi = 1`.
    pub fn sinc_factor(&self, chi: f64) -> Result<f64> {
        let w = self.w(chi)?;
        Ok(self.t * sinc_w(w))
    }
}

/// Interpolation weight `tau_lambda(s)` on `[0, t]` for `f'' + lambda f <= 0`.
pub fn tau_lambda(lambda: f64, s: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidDescriptor(format!("t must be positive, got {t}")));
    }
    let limit = PI * PI / (t * t);
    if !(lambda < limit) {
        return Err(Error::DomainError { x: lambda, limit });
    }
    if lambda == 0.0 {
        return Ok(s / t);
    }
    Ok(s / t * sinc_w(lambda * s * s) / sinc_w(lambda * t * t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liyau::profile::{sine_closed_form, sinh_closed_form, LiYauProfile};

    #[test]
    fn value_at_one() {
        for (k, t) in [(-0.7, 0.4), (1.3, 2.0)] {
            let p = PsiEvaluator::new(3.0, k, t).unwrap();
            assert!((p.value(1.0).unwrap() - (1.0 / t - k / 2.0)).abs() < 1e-14);
            for dx in [1e-6, -1e-6] {
                let w: f64 = k * k * t * t * dx;
                let branch = if w > 0.0 {
                    0.5 * k * (1.0 + dx - 2.0) + w.sqrt() / w.sqrt().tan() / t
                } else {
                    0.5 * k * (1.0 + dx - 2.0) + (-w).sqrt() / (-w).sqrt().tanh() / t
                };
                assert!((p.value(1.0 + dx).unwrap() - branch).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn series_meets_branches() {
        for w in [SERIES_WINDOW, -SERIES_WINDOW] {
            let lo = w * (1.0 - 1e-12);
            let z = w.abs().sqrt();
            let exact = if w > 0.0 { z / z.tan() } else { z / z.tanh() };
            assert!((zcot(lo) - exact).abs() < 1e-14);
            let d_exact = if w > 0.0 {
                (1.0 / z.tan() - z / z.sin().powi(2)) / (2.0 * z)
            } else {
                -(1.0 / z.tanh() - z / z.sinh().powi(2)) / (2.0 * z)
            };
            assert!((zcot_derivative(lo) - d_exact).abs() < 1e-10);
        }
    }

    #[test]
    fn derivative_matches_difference() {
        let p = PsiEvaluator::new(2.0, -1.0, 0.8).unwrap();
        for x in [-5.0, 0.3, 1.0, 1.0005, 4.0, 10.0] {
            let h = 1e-5;
            let fd = (p.value(x + h).unwrap() - p.value(x - h).unwrap()) / (2.0 * h);
            assert!((fd - p.derivative(x).unwrap()).abs() < 1e-6, "x={x}");
        }
    }

    #[test]
    fn domain_error_at_limit() {
        let p = PsiEvaluator::new(2.0, -1.0, 1.0).unwrap();
        assert!(matches!(p.value(p.upper_limit()), Err(Error::DomainError { .. })));
    }

    #[test]
    fn linearization_reproduces_profiles() {
        let (n, t) = (3.0, 0.9);
        for k in [-1.2, 0.6] {
            let p = PsiEvaluator::new(n, k, t).unwrap();
            let tau1 = 2.0;
            let lin = p.linearize(p.tangent_point(tau1, true)).unwrap();
            let cf = sine_closed_form(tau1, k, n, t);
            assert!((lin.alpha - cf.alpha).abs() < 1e-9);
            assert!((lin.phi - cf.phi).abs() < 1e-9);
            let tau2 = 0.7;
            let lin = p.linearize(p.tangent_point(tau2, false)).unwrap();
            let cf = sinh_closed_form(tau2, k, n, t);
            assert!((lin.alpha - cf.alpha).abs() < 1e-9);
            assert!((lin.phi - cf.phi).abs() < 1e-9);
            let lin = p.linearize(p.tangent_point(k.abs(), false)).unwrap();
            let lx = LiYauProfile::LiXu.alpha_phi(k, n, t).unwrap();
            assert!((lin.alpha - lx.alpha).abs() < 1e-9);
            assert!((lin.phi - lx.phi).abs() < 1e-9);
        }
    }

    #[test]
    fn roots_per_mode() {
        let p = PsiEvaluator::new(2.0, -0.5, 1.5).unwrap();
        let PsiRoots::One { chi0 } = p.roots().unwrap() else { panic!() };
        assert!(chi0 > 1.0 && chi0 < p.upper_limit());
        assert!(p.value(chi0).unwrap().abs() < 1e-8);

        let k = 0.8;
        let p = PsiEvaluator::new(2.0, k, 2.0 / k).unwrap();
        let PsiRoots::Two { chi1, chi2 } = p.roots().unwrap() else { panic!() };
        assert!(chi1 < 0.0 && (chi2 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn long_time_positive_curvature_bound() {
        let k = 0.5;
        for t in [6.0 / k, 8.0 / k, 12.0 / k] {
            let p = PsiEvaluator::new(4.0, k, t).unwrap();
            let (_, m) = p.feasible_max().unwrap();
            assert!(m <= 3.0 * k * (2.0 - 2.0 * k * t).exp(), "t={t}: {m}");
        }
    }

    #[test]
    fn davies_tangent_dominates() {
        let p = PsiEvaluator::new(2.0, -0.9, 0.7).unwrap();
        let top = p.upper_limit();
        for alpha in [1.01, 1.5, 3.0] {
            for i in 0..400 {
                let x = -20.0 + (top - 1e-9 + 20.0) * i as f64 / 399.0;
                assert!(p.value(x).unwrap() <= p.davies_bound(alpha, x).unwrap() + 1e-12);
            }
        }
    }

    #[test]
    fn tau_lambda_branches() {
        assert_eq!(tau_lambda(0.0, 0.3, 1.0).unwrap(), 0.3);
        for l in [2.0, -2.0, 1e-8, -1e-8] {
            assert!((tau_lambda(l, 1.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        }
        for l in [1e-8, -1e-8] {
            assert!((tau_lambda(l, 0.05, 0.1).unwrap() - 0.5).abs() < 1e-10);
        }
        let direct = (0.4 * 2f64.sqrt()).sin() / (1.0 * 2f64.sqrt()).sin();
        assert!((tau_lambda(2.0, 0.4, 1.0).unwrap() - direct).abs() < 1e-14);
        assert!(tau_lambda(PI * PI, 0.5, 1.0).is_err());
    }
}
