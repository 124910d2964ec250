//! Two-dimensional vectors and symmetric matrices.
//!
//! One-dimensional problems reuse the same types with the second
//! component held at zero.

use serde::{Deserialize, Serialize};

pub type Vec2 = [f64; 2];

pub fn dot(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

pub fn norm2(a: Vec2) -> f64 {
    dot(a, a).sqrt()
}

pub fn add(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] + b[0], a[1] + b[1]]
}

pub fn sub(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] - b[0], a[1] - b[1]]
}

pub fn scale(s: f64, a: Vec2) -> Vec2 {
    [s * a[0], s * a[1]]
}

/// Symmetric 2x2 matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sym2 {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
}

impl Sym2 {
    pub const IDENTITY: Sym2 = Sym2 { xx: 1.0, xy: 0.0, yy: 1.0 };

    pub fn new(xx: f64, xy: f64, yy: f64) -> Self {
        Sym2 { xx, xy, yy }
    }

    pub fn diag(xx: f64, yy: f64) -> Self {
        Sym2 { xx, xy: 0.0, yy }
    }

    pub fn scalar(s: f64) -> Self {
        Sym2 { xx: s, xy: 0.0, yy: s }
    }

    pub fn outer(v: Vec2) -> Self {
        Sym2 { xx: v[0] * v[0], xy: v[0] * v[1], yy: v[1] * v[1] }
    }

    pub fn add(self, o: Sym2) -> Sym2 {
        Sym2 { xx: self.xx + o.xx, xy: self.xy + o.xy, yy: self.yy + o.yy }
    }

    pub fn sub(self, o: Sym2) -> Sym2 {
        Sym2 { xx: self.xx - o.xx, xy: self.xy - o.xy, yy: self.yy - o.yy }
    }

    pub fn scaled(self, s: f64) -> Sym2 {
        Sym2 { xx: s * self.xx, xy: s * self.xy, yy: s * self.yy }
    }

    pub fn det(&self) -> f64 {
        self.xx * self.yy - self.xy * self.xy
    }

    pub fn trace(&self) -> f64 {
        self.xx + self.yy
    }

    pub fn apply(&self, v: Vec2) -> Vec2 {
        [self.xx * v[0] + self.xy * v[1], self.xy * v[0] + self.yy * v[1]]
    }

    pub fn quad(&self, v: Vec2) -> f64 {
        dot(v, self.apply(v))
    }

    pub fn bilinear(&self, u: Vec2, v: Vec2) -> f64 {
        dot(u, self.apply(v))
    }

    pub fn inverse(&self) -> Option<Sym2> {
        let d = self.det();
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        Some(Sym2 { xx: self.yy / d, xy: -self.xy / d, yy: self.xx / d })
    }

    /// Solve `self * x = r`.
    pub fn solve(&self, r: Vec2) -> Option<Vec2> {
        self.inverse().map(|inv| inv.apply(r))
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let m = 0.5 * (self.xx + self.yy);
        let r = (0.25 * (self.xx - self.yy).powi(2) + self.xy * self.xy).sqrt();
        (m - r, m + r)
    }

    pub fn is_positive_definite(&self) -> bool {
        self.xx > 0.0 && self.det() > 0.0
    }

    /// `tr(self * o * self * o)` style contraction `tr(A B A B)` with
    /// `A = self`, `B = o`.
    pub fn trace_abab(&self, b: &Sym2) -> f64 {
        // C = A B (not symmetric in general)
        let c00 = self.xx * b.xx + self.xy * b.xy;
        let c01 = self.xx * b.xy + self.xy * b.yy;
        let c10 = self.xy * b.xx + self.yy * b.xy;
        let c11 = self.xy * b.xy + self.yy * b.yy;
        c00 * c00 + 2.0 * c01 * c10 + c11 * c11
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        let a = Sym2::new(2.0, 0.3, 1.5);
        let inv = a.inverse().unwrap();
        let v = [0.7, -1.2];
        let w = inv.apply(a.apply(v));
        assert!((w[0] - v[0]).abs() < 1e-14 && (w[1] - v[1]).abs() < 1e-14);
    }

    #[test]
    fn eigenvalues_of_diagonal() {
        let (l0, l1) = Sym2::diag(4.0, 1.0).eigenvalues();
        assert_eq!((l0, l1), (1.0, 4.0));
    }

    #[test]
    fn trace_abab_identity_is_frobenius() {
        let h = Sym2::new(1.0, 2.0, 3.0);
        let f = h.xx * h.xx + 2.0 * h.xy * h.xy + h.yy * h.yy;
        assert!((Sym2::IDENTITY.trace_abab(&h) - f).abs() < 1e-14);
    }
}
