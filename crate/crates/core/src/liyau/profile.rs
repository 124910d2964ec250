use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::adaptive_simpson;

/// Weight function `a(t)` generating the coefficients `alpha(t), phi(t)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LiYauProfile {
    /// `a = t^2`.
    Quadratic,
    /// `a = 4 tau sin^2(tau t)` with `0 < tau < pi / t`.
    Sine { tau: f64 },
    /// `a = 4 tau sinh^2(tau t)`.
    Sinh { tau: f64 },
    /// `a = 4 |K| sinh^2(|K| t)`.
    LiXu,
    /// Sampled `a(t)` on increasing times; `sqrt(a)` is interpolated by a natural cubic spline.
    Table { t: Vec<f64>, a: Vec<f64> },
}

/// Coefficients of `F^2(grad log u) - alpha d_t log u <= phi`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiYauCoefficients {
    pub alpha: f64,
    pub phi: f64,
}

const QUAD_TOL: f64 = 1e-10;
const ENDPOINT_SHIFT: f64 = 1e-8;
const SMALL_ARG: f64 = 1e-3;

impl LiYauProfile {
    /// Effective rate for Li-Xu at curvature `k`.
    fn rate(&self, k: f64) -> Option<f64> {
        match *self {
            LiYauProfile::Sine { tau } | LiYauProfile::Sinh { tau } => Some(tau),
            LiYauProfile::LiXu => Some(k.abs()),
            _ => None,
        }
    }

    /// Check the admissibility conditions on `(0, t]`.
    pub fn validate(&self, k: f64, t: f64) -> Result<()> {
        if !(t > 0.0) {
            return Err(Error::ProfileInadmissible(format!("time {t} must be positive")));
        }
        match self {
            LiYauProfile::Quadratic => Ok(()),
            LiYauProfile::Sine { tau } => {
                if *tau > 0.0 && tau * t < std::f64::consts::PI {
                    Ok(())
                } else {
                    Err(Error::ProfileInadmissible(format!("sine rate {tau} outside (0, pi/{t})")))
                }
            }
            LiYauProfile::Sinh { tau } => {
                if *tau > 0.0 {
                    Ok(())
                } else {
                    Err(Error::ProfileInadmissible(format!("sinh rate {tau} must be positive")))
                }
            }
            LiYauProfile::LiXu => {
                let _ = k;
                Ok(())
            }
            LiYauProfile::Table { t: ts, a } => Spline::new(ts, a)?.validate(t),
        }
    }

    /// `a(s)` and `a'(s)`.
    pub fn eval(&self, k: f64, s: f64) -> Result<(f64, f64)> {
        Ok(match self {
            LiYauProfile::Quadratic => (s * s, 2.0 * s),
            LiYauProfile::Sine { tau } => {
                let x = tau * s;
                (4.0 * tau * x.sin().powi(2), 4.0 * tau * tau * (2.0 * x).sin())
            }
            LiYauProfile::Sinh { .. } | LiYauProfile::LiXu => {
                let tau = self.rate(k).unwrap();
                if tau == 0.0 {
                    (s * s, 2.0 * s)
                } else {
                    let x = tau * s;
                    (4.0 * tau * x.sinh().powi(2), 4.0 * tau * tau * (2.0 * x).sinh())
                }
            }
            LiYauProfile::Table { t, a } => Spline::new(t, a)?.eval(s),
        })
    }

    /// Closed forms where available, quadrature otherwise.
    pub fn alpha_phi(&self, k: f64, n: f64, t: f64) -> Result<LiYauCoefficients> {
        self.validate(k, t)?;
        match self {
            LiYauProfile::Quadratic => Ok(LiYauCoefficients {
                alpha: 1.0 - 2.0 * k * t / 3.0,
                phi: -0.5 * n * k * (1.0 - k * t / 3.0) + n / (2.0 * t),
            }),
            LiYauProfile::Sine { tau } => Ok(sine_closed_form(*tau, k, n, t)),
            LiYauProfile::Sinh { tau } => Ok(sinh_closed_form(*tau, k, n, t)),
            LiYauProfile::LiXu => {
                if k == 0.0 {
                    LiYauProfile::Quadratic.alpha_phi(k, n, t)
                } else {
                    Ok(sinh_closed_form(k.abs(), k, n, t))
                }
            }
            LiYauProfile::Table { .. } => self.alpha_phi_quadrature(k, n, t),
        }
    }

    /// Coefficients from the integral definitions.
    pub fn alpha_phi_quadrature(&self, k: f64, n: f64, t: f64) -> Result<LiYauCoefficients> {
        self.validate(k, t)?;
        let eps = ENDPOINT_SHIFT * t;
        let a_of = |s: f64| self.eval(k, s).map(|p| p.0).unwrap_or(f64::NAN);
        let q_of = |s: f64| {
            self.eval(k, s).map(|(a, da)| if a > 0.0 { da * da / a } else { f64::NAN }).unwrap_or(f64::NAN)
        };
        // the piece on [0, eps] is taken as eps times the integrand at eps
        let int_a = adaptive_simpson(a_of, eps, t, QUAD_TOL) + eps * a_of(eps);
        let int_q = adaptive_simpson(q_of, eps, t, QUAD_TOL) + eps * q_of(eps);
        if !int_q.is_finite() || !int_a.is_finite() {
            return Err(Error::ProfileInadmissible("a'^2/a is not integrable".into()));
        }
        let at = a_of(t);
        Ok(LiYauCoefficients {
            alpha: 1.0 - 2.0 * k / at * int_a,
            phi: -0.5 * n * k + n * k * k / (2.0 * at) * int_a + n / (8.0 * at) * int_q,
        })
    }

    /// Largest residual of the two coefficient ODEs at the given times,
    /// using centred differences in `t`.
    pub fn ode_residual(&self, k: f64, n: f64, times: &[f64]) -> Result<f64> {
        let mut worst = 0.0f64;
        for &t in times {
            let d = 1e-4 * t;
            let lo = self.alpha_phi(k, n, t - d)?;
            let hi = self.alpha_phi(k, n, t + d)?;
            let mid = self.alpha_phi(k, n, t)?;
            let (a, da) = self.eval(k, t)?;
            let dlog = da / a;
            let dalpha = (hi.alpha - lo.alpha) / (2.0 * d);
            let dphi = (hi.phi - lo.phi) / (2.0 * d);
            let r1 = dalpha + dlog * (mid.alpha - 1.0) + 2.0 * k;
            let r2 = dphi + dlog * mid.phi - n / 8.0 * (dlog - 2.0 * k).powi(2);
            let s1 = (dlog * (mid.alpha - 1.0)).abs().max(2.0 * k.abs()).max(1.0);
            let s2 = (dlog * mid.phi).abs().max(1.0);
            worst = worst.max(r1.abs() / s1).max(r2.abs() / s2);
        }
        Ok(worst)
    }
}

/// `(x - sin x cos x)` style numerators with a series for small arguments:
/// returns `(2x - sin 2x) / (2 sin^2 x)`.
fn sin_ratio(x: f64) -> f64 {
    if x.abs() < SMALL_ARG {
        let x2 = x * x;
        2.0 * x / 3.0 * (1.0 + 2.0 * x2 / 15.0)
    } else {
        (2.0 * x - (2.0 * x).sin()) / (2.0 * x.sin().powi(2))
    }
}

/// `(sinh 2x - 2x) / (2 sinh^2 x)`.
fn sinh_ratio(x: f64) -> f64 {
    if x.abs() < SMALL_ARG {
        let x2 = x * x;
        2.0 * x / 3.0 * (1.0 - 2.0 * x2 / 15.0)
    } else {
        ((2.0 * x).sinh() - 2.0 * x) / (2.0 * x.sinh().powi(2))
    }
}

/// Closed form for `a = 4 tau sin^2(tau t)`.
pub fn sine_closed_form(tau: f64, k: f64, n: f64, t: f64) -> LiYauCoefficients {
    let x = tau * t;
    let r = sin_ratio(x);
    let s2 = x.sin().powi(2);
    let head = tau * ((2.0 * x).sin() + 2.0 * x) / (4.0 * s2);
    LiYauCoefficients { alpha: 1.0 - k / tau * r, phi: 0.5 * n * (-k + head + k * k / (2.0 * tau) * r) }
}

/// Closed form for `a = 4 tau sinh^2(tau t)`.
pub fn sinh_closed_form(tau: f64, k: f64, n: f64, t: f64) -> LiYauCoefficients {
    let x = tau * t;
    let r = sinh_ratio(x);
    let head = if x.abs() < SMALL_ARG {
        // tau (sinh 2x + 2x) / (4 sinh^2 x) -> 1/t + tau x / 3
        1.0 / t + tau * x / 3.0
    } else {
        tau * ((2.0 * x).sinh() + 2.0 * x) / (4.0 * x.sinh().powi(2))
    };
    LiYauCoefficients { alpha: 1.0 - k / tau * r, phi: 0.5 * n * (-k + head + k * k / (2.0 * tau) * r) }
}

/// Natural cubic spline through `(t_i, sqrt(a_i))`.
struct Spline<'a> {
    t: &'a [f64],
    b: Vec<f64>,
    m: Vec<f64>,
}

impl<'a> Spline<'a> {
    fn new(t: &'a [f64], a: &'a [f64]) -> Result<Self> {
        let n = t.len();
        if n < 3 || a.len() != n {
            return Err(Error::ProfileInadmissible("table needs at least 3 matching samples".into()));
        }
        if t.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::ProfileInadmissible("table times must increase".into()));
        }
        if t[0] != 0.0 || a[0] != 0.0 {
            return Err(Error::ProfileInadmissible("table must start at a(0) = 0".into()));
        }
        if a[1..].iter().any(|v| !(*v > 0.0)) {
            return Err(Error::ProfileInadmissible("a must be positive on (0, t]".into()));
        }
        let a: Vec<f64> = a.iter().map(|v| v.sqrt()).collect();
        // second derivatives m_i, natural ends
        let mut m = vec![0.0; n];
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        for i in 1..n - 1 {
            let h0 = t[i] - t[i - 1];
            let h1 = t[i + 1] - t[i];
            let rhs = 6.0 * ((a[i + 1] - a[i]) / h1 - (a[i] - a[i - 1]) / h0);
            let diag = 2.0 * (h0 + h1) - h0 * c[i - 1];
            c[i] = h1 / diag;
            d[i] = (rhs - h0 * d[i - 1]) / diag;
        }
        for i in (1..n - 1).rev() {
            m[i] = d[i] - c[i] * m[i + 1];
        }
        Ok(Spline { t, b: a, m })
    }

    fn eval(&self, s: f64) -> (f64, f64) {
        let (b, db) = self.eval_root(s);
        (b * b, 2.0 * b * db)
    }

    fn eval_root(&self, s: f64) -> (f64, f64) {
        let n = self.t.len();
        let i = match self.t.iter().position(|&x| x > s) {
            Some(0) => 0,
            Some(p) => p - 1,
            None => n - 2,
        };
        let (t0, t1) = (self.t[i], self.t[i + 1]);
        let h = t1 - t0;
        let (a0, a1, m0, m1) = (self.b[i], self.b[i + 1], self.m[i], self.m[i + 1]);
        let u = t1 - s;
        let v = s - t0;
        let val = m0 * u.powi(3) / (6.0 * h) + m1 * v.powi(3) / (6.0 * h) + (a0 / h - m0 * h / 6.0) * u
            + (a1 / h - m1 * h / 6.0) * v;
        let der = -m0 * u * u / (2.0 * h) + m1 * v * v / (2.0 * h) - (a0 / h - m0 * h / 6.0) + (a1 / h - m1 * h / 6.0);
        (val, der)
    }

    fn validate(&self, t: f64) -> Result<()> {
        if t > *self.t.last().unwrap() {
            return Err(Error::ProfileInadmissible(format!("time {t} beyond the table")));
        }
        // a > 0 on (0, t] and a / a' -> 0 at the origin
        let probes = 200;
        for j in 1..=probes {
            let s = t * j as f64 / probes as f64;
            if !(self.eval(s).0 > 0.0) {
                return Err(Error::ProfileInadmissible(format!("a vanishes at {s}")));
            }
        }
        let s = ENDPOINT_SHIFT * t;
        let (a, da) = self.eval(s);
        if !(a > 0.0 && da > 0.0 && a / da < 1e-3 * t) {
            return Err(Error::ProfileInadmissible("a / a' does not vanish at 0".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_closed_form_matches_quadrature() {
        for k in [-1.0, 0.3] {
            for t in [0.01, 1.0, 5.0] {
                let c = LiYauProfile::Quadratic.alpha_phi(k, 3.0, t).unwrap();
                let q = LiYauProfile::Quadratic.alpha_phi_quadrature(k, 3.0, t).unwrap();
                assert!((c.alpha - q.alpha).abs() < 1e-10);
                assert!((c.phi - q.phi).abs() < 1e-10 * c.phi.abs().max(1.0));
            }
        }
    }

    #[test]
    fn sine_rate_bound() {
        assert!(LiYauProfile::Sine { tau: 1.0 }.alpha_phi(1.0, 2.0, 3.2).is_err());
        assert!(LiYauProfile::Sine { tau: 1.0 }.alpha_phi(1.0, 2.0, 3.1).is_ok());
    }

    #[test]
    fn lixu_is_k_symmetric_formula() {
        for k in [-0.7, 0.7] {
            let t: f64 = 1.3;
            let c = LiYauProfile::LiXu.alpha_phi(k, 4.0, t).unwrap();
            let kt = k * t;
            let alpha = 1.0 - ((2.0 * kt).sinh() - 2.0 * kt) / (2.0 * kt.sinh().powi(2));
            let phi = -2.0 * k * (1.0 - 1.0 / kt.tanh());
            assert!((c.alpha - alpha).abs() < 1e-13);
            assert!((c.phi - phi).abs() < 1e-12);
        }
    }

    #[test]
    fn odes_hold_for_presets() {
        let times = [0.1, 0.5, 1.0, 2.0];
        for p in [LiYauProfile::Quadratic, LiYauProfile::Sinh { tau: 0.8 }, LiYauProfile::LiXu] {
            assert!(p.ode_residual(-0.6, 3.0, &times).unwrap() < 1e-6);
        }
        assert!(LiYauProfile::Sine { tau: 1.0 }.ode_residual(0.4, 3.0, &times).unwrap() < 1e-6);
    }

    #[test]
    fn table_reproduces_quadratic() {
        let t: Vec<f64> = (0..=400).map(|i| i as f64 * 0.005).collect();
        let a: Vec<f64> = t.iter().map(|s| s * s).collect();
        let p = LiYauProfile::Table { t, a };
        let c = p.alpha_phi(-0.5, 2.0, 1.5).unwrap();
        let e = LiYauProfile::Quadratic.alpha_phi(-0.5, 2.0, 1.5).unwrap();
        assert!((c.alpha - e.alpha).abs() < 1e-6);
        assert!((c.phi - e.phi).abs() < 1e-4, "{} {}", c.phi, e.phi);
    }

    #[test]
    fn table_rejects_bad_start() {
        let p = LiYauProfile::Table { t: vec![0.0, 1.0, 2.0], a: vec![1.0, 2.0, 3.0] };
        assert!(matches!(p.alpha_phi(0.0, 2.0, 1.0), Err(Error::ProfileInadmissible(_))));
    }
}
