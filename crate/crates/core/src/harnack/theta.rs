use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::liyau::{PsiEvaluator, PsiRoots};
use crate::numerics::golden_max;
use crate::semigroup::K_ZERO;

const GOLDEN_TOL: f64 = 1e-10;

/// `Theta_{t,K}` on its feasible interval `[lo, hi]` (`hi` may be infinite).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaDescriptor {
    pub n: f64,
    pub k: f64,
    pub t: f64,
    pub lo: f64,
    pub hi: f64,
    psi: Option<PsiEvaluator>,
}

impl ThetaDescriptor {
    pub fn new(n: f64, k: f64, t: f64) -> Result<Self> {
        if !(n.is_finite() && n > 0.0 && t > 0.0) {
            return Err(Error::InvalidDescriptor(format!("Theta needs finite N > 0 and t > 0, got N={n}, t={t}")));
        }
        if k.abs() < K_ZERO {
            return Ok(ThetaDescriptor { n, k: 0.0, t, lo: -n / (2.0 * t), hi: f64::INFINITY, psi: None });
        }
        let psi = PsiEvaluator::new(n, k, t)?;
        let (lo, hi) = match psi.roots()? {
            PsiRoots::One { chi0 } => (psi.xi_of(chi0), f64::INFINITY),
            PsiRoots::Two { chi1, chi2 } => (psi.xi_of(chi1), psi.xi_of(chi2)),
        };
        Ok(ThetaDescriptor { n, k, t, lo, hi, psi: Some(psi) })
    }

    pub fn contains(&self, xi: f64) -> bool {
        xi >= self.lo && xi <= self.hi
    }

    /// `Theta(xi) <= 0`; rounding at the interval ends is clamped to `0`.
    pub fn theta(&self, xi: f64) -> Result<f64> {
        if !self.contains(xi) {
            return Err(Error::DomainError { x: xi, limit: if xi < self.lo { self.lo } else { self.hi } });
        }
        let v = match self.psi {
            None => self.n / (2.0 * self.t) + xi,
            Some(p) => p.scaled(xi)?,
        };
        Ok(-v.max(0.0).sqrt())
    }

    /// Whether `sup_xi (q xi - Theta(xi))` is finite.
    pub fn conjugate_finite(&self, q: f64) -> bool {
        self.hi.is_finite() || q < 0.0
    }

    /// Legendre-Fenchel conjugate `sup_xi (q xi - Theta(xi))`, by golden section.
    pub fn conjugate(&self, q: f64) -> Result<f64> {
        if !self.conjugate_finite(q) {
            return Err(Error::Unbounded(q));
        }
        let g = |xi: f64| q * xi - self.theta(xi).unwrap_or(f64::INFINITY);
        let hi = if self.hi.is_finite() {
            self.hi
        } else {
            // concave: once g stops increasing the maximiser is bracketed
            let mut step = self.lo.abs().max(1.0);
            let mut prev = g(self.lo + step);
            loop {
                let next = g(self.lo + 2.0 * step);
                step *= 2.0;
                if next <= prev || step > 1e300 {
                    break self.lo + step;
                }
                prev = next;
            }
        };
        let tol = GOLDEN_TOL * (hi - self.lo).abs().max(1.0);
        Ok(golden_max(g, self.lo, hi, tol).1)
    }

    /// Closed form at `K = 0`: `-(N / 2t) q - 1 / (4 q)` for `q < 0`.
    pub fn conjugate_flat(n: f64, t: f64, q: f64) -> Result<f64> {
        if !(q < 0.0) {
            return Err(Error::Unbounded(q));
        }
        Ok(-n / (2.0 * t) * q - 1.0 / (4.0 * q))
    }
}
