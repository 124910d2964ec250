use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harnack::theta::ThetaDescriptor;
use crate::liyau::LiYauProfile;
use crate::numerics::adaptive_simpson;
use crate::semigroup::K_ZERO;

const QUAD_TOL: f64 = 1e-10;
const ALPHA_PROBES: usize = 200;

/// Which Harnack bound to evaluate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum HarnackMode {
    /// Integrated linear Li-Yau bound for a profile.
    Integral { profile: LiYauProfile },
    /// Conjugate (`Theta*`) form.
    Lf,
}

fn check_times(t1: f64, t2: f64, d: f64) -> Result<()> {
    if !(t1 > 0.0 && t2 > t1) {
        return Err(Error::IndexRange(format!("Harnack bound needs 0 < t1 < t2, got t1={t1}, t2={t2}")));
    }
    if !(d >= 0.0) {
        return Err(Error::InvalidDescriptor(format!("distance must be nonnegative, got {d}")));
    }
    Ok(())
}

/// `exp(d^2 / (4 (t2 - t1)^2) int alpha + int phi / alpha)` over `[t1, t2]`.
pub fn harnack_bound_integral(profile: &LiYauProfile, k: f64, n: f64, d: f64, t1: f64, t2: f64) -> Result<f64> {
    check_times(t1, t2, d)?;
    for j in 0..=ALPHA_PROBES {
        let t = t1 + (t2 - t1) * j as f64 / ALPHA_PROBES as f64;
        if !(profile.alpha_phi(k, n, t)?.alpha > 0.0) {
            return Err(Error::AlphaSignChange { t1, t2 });
        }
    }
    let alpha = |t: f64| profile.alpha_phi(k, n, t).map(|c| c.alpha).unwrap_or(f64::NAN);
    let ratio = |t: f64| profile.alpha_phi(k, n, t).map(|c| c.phi / c.alpha).unwrap_or(f64::NAN);
    let int_alpha = adaptive_simpson(alpha, t1, t2, QUAD_TOL);
    let int_ratio = adaptive_simpson(ratio, t1, t2, QUAD_TOL);
    let span = t2 - t1;
    Ok((d * d / (4.0 * span * span) * int_alpha + int_ratio).exp())
}

/// `exp((d / (t2 - t1)) int Theta*_{t,K}(-(t2 - t1) / d) dt)`; at `d = 0` the
/// integrand is its limit `-lo(t)`, the left end of the feasible interval.
pub fn harnack_bound_lf(n: f64, k: f64, d: f64, t1: f64, t2: f64) -> Result<f64> {
    check_times(t1, t2, d)?;
    let span = t2 - t1;
    if k.abs() < K_ZERO {
        return Ok(harnack_bound_flat(n, d, t1, t2));
    }
    let integrand = |t: f64| -> Result<f64> {
        let th = ThetaDescriptor::new(n, k, t)?;
        if d == 0.0 {
            Ok(-th.lo)
        } else {
            Ok(d / span * th.conjugate(-span / d)?)
        }
    };
    // surface the first failure instead of integrating NaN
    integrand(t1)?;
    integrand(t2)?;
    let v = adaptive_simpson(|t| integrand(t).unwrap_or(f64::NAN), t1, t2, QUAD_TOL);
    if !v.is_finite() {
        return Err(Error::Unbounded(-span / d.max(f64::MIN_POSITIVE)));
    }
    Ok(v.exp())
}

/// `(t2 / t1)^{N/2} exp(d^2 / (4 (t2 - t1)))`.
pub fn harnack_bound_flat(n: f64, d: f64, t1: f64, t2: f64) -> f64 {
    (t2 / t1).powf(0.5 * n) * (d * d / (4.0 * (t2 - t1))).exp()
}

pub fn harnack_bound(mode: &HarnackMode, n: f64, k: f64, d: f64, t1: f64, t2: f64) -> Result<f64> {
    match mode {
        HarnackMode::Integral { profile } => harnack_bound_integral(profile, k, n, d, t1, t2),
        HarnackMode::Lf => harnack_bound_lf(n, k, d, t1, t2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_forms_agree() {
        let p = LiYauProfile::Quadratic;
        for d in [0.0, 0.3, 1.2] {
            let a = harnack_bound_integral(&p, 0.0, 2.0, d, 0.2, 0.9).unwrap();
            let b = harnack_bound_flat(2.0, d, 0.2, 0.9);
            assert!((a / b - 1.0).abs() < 1e-9);
        }
        let zero = harnack_bound_integral(&p, 0.0, 3.0, 0.0, 0.5, 1.0).unwrap();
        assert!((zero - 2f64.powf(1.5)).abs() < 1e-9);
    }

    #[test]
    fn small_negative_curvature_approaches_flat() {
        let (n, d, t1, t2) = (2.0, 0.4, 0.3, 0.8);
        let b = harnack_bound_lf(n, -1e-6, d, t1, t2).unwrap();
        let f = harnack_bound_flat(n, d, t1, t2);
        assert!((b / f - 1.0).abs() < 1e-4, "{b} {f}");
    }

    #[test]
    fn bounds_grow_with_distance() {
        let mut prev = 0.0;
        for d in [0.0, 0.1, 0.5, 1.0] {
            let b = harnack_bound_lf(2.0, -0.5, d, 0.2, 0.6).unwrap();
            assert!(b >= prev);
            prev = b;
        }
    }

    #[test]
    fn alpha_sign_change_is_reported() {
        // alpha = 1 - 2Kt/3 vanishes at t = 1.5 for K = 1
        let r = harnack_bound_integral(&LiYauProfile::Quadratic, 1.0, 2.0, 0.1, 1.0, 2.0);
        assert!(matches!(r, Err(Error::AlphaSignChange { .. })));
    }

    #[test]
    fn rejects_equal_times() {
        assert!(harnack_bound_lf(2.0, 0.0, 0.1, 1.0, 1.0).is_err());
    }
}
