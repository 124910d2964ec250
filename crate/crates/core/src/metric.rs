//! Norm families, their duals, fundamental tensors and the Legendre map.
//!
//! A [`NormDescriptor`] describes a positively homogeneous, possibly
//! non-reversible norm on one tangent space. A [`MetricField`] attaches one
//! descriptor to every node of a torus grid.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::TorusGrid;
use crate::linalg::{add, dot, norm2, scale, sub, Sym2, Vec2};
use crate::numerics::golden_max;

/// Vectors with `F(v)` at or below this are treated as zero.
pub const EPS_GRAD: f64 = 1e-12;

const NEWTON_MAX_ITER: usize = 50;
const NEWTON_TOL: f64 = 1e-12;
const NEWTON_MAX_HALVINGS: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum NormDescriptor {
    Euclidean { dim: usize },
    Riemannian { dim: usize, a: Sym2 },
    /// `F(y) = sqrt(a(y, y)) + b(y)`, admissible when `|b|_a < 1`.
    Randers { dim: usize, a: Sym2, b: Vec2 },
    /// `F(y) = plus * y` for `y >= 0`, `-minus * y` otherwise.
    #[serde(rename = "asym1d")]
    Asym1D { plus: f64, minus: f64 },
}

/// How gradient-dependent quantities are formed where the gradient vanishes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DegenerateFallback {
    /// Use the quadratic part of the family.
    #[default]
    RiemannianPart,
    /// Use the Euclidean identity.
    Identity,
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 1 || dim == 2 {
        Ok(())
    } else {
        Err(Error::InvalidDescriptor(format!("dimension {dim} not in {{1, 2}}")))
    }
}

fn embed_1d(a: Sym2, dim: usize) -> Sym2 {
    if dim == 1 {
        Sym2::scalar(a.xx)
    } else {
        a
    }
}

impl NormDescriptor {
    pub fn euclidean(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(NormDescriptor::Euclidean { dim })
    }

    pub fn riemannian(dim: usize, a: Sym2) -> Result<Self> {
        check_dim(dim)?;
        let a = embed_1d(a, dim);
        if !a.is_positive_definite() {
            return Err(Error::InvalidDescriptor("matrix is not positive definite".into()));
        }
        Ok(NormDescriptor::Riemannian { dim, a })
    }

    pub fn randers(dim: usize, a: Sym2, b: Vec2) -> Result<Self> {
        check_dim(dim)?;
        let a = embed_1d(a, dim);
        let b = if dim == 1 { [b[0], 0.0] } else { b };
        if !a.is_positive_definite() {
            return Err(Error::InvalidDescriptor("matrix is not positive definite".into()));
        }
        let bn = a.inverse().unwrap().quad(b).sqrt();
        if !(bn < 1.0) {
            return Err(Error::InvalidDescriptor(format!("|b|_a = {bn} must be below 1")));
        }
        Ok(NormDescriptor::Randers { dim, a, b })
    }

    pub fn asym_1d(plus: f64, minus: f64) -> Result<Self> {
        if !(plus > 0.0 && minus > 0.0) {
            return Err(Error::InvalidDescriptor("asymmetric weights must be positive".into()));
        }
        Ok(NormDescriptor::Asym1D { plus, minus })
    }

    /// Re-run the constructor checks on a deserialised descriptor.
    pub fn validated(self) -> Result<Self> {
        match self {
            NormDescriptor::Euclidean { dim } => Self::euclidean(dim),
            NormDescriptor::Riemannian { dim, a } => Self::riemannian(dim, a),
            NormDescriptor::Randers { dim, a, b } => Self::randers(dim, a, b),
            NormDescriptor::Asym1D { plus, minus } => Self::asym_1d(plus, minus),
        }
    }

    pub fn dim(&self) -> usize {
        match *self {
            NormDescriptor::Euclidean { dim }
            | NormDescriptor::Riemannian { dim, .. }
            | NormDescriptor::Randers { dim, .. } => dim,
            NormDescriptor::Asym1D { .. } => 1,
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            NormDescriptor::Euclidean { .. } => "euclidean",
            NormDescriptor::Riemannian { .. } => "riemannian",
            NormDescriptor::Randers { .. } => "randers",
            NormDescriptor::Asym1D { .. } => "asym1d",
        }
    }

    fn project(&self, y: Vec2) -> Vec2 {
        if self.dim() == 1 {
            [y[0], 0.0]
        } else {
            y
        }
    }

    /// The reverse norm `y -> F(-y)`.
    pub fn reverse(&self) -> NormDescriptor {
        match *self {
            NormDescriptor::Randers { dim, a, b } => NormDescriptor::Randers { dim, a, b: scale(-1.0, b) },
            NormDescriptor::Asym1D { plus, minus } => NormDescriptor::Asym1D { plus: minus, minus: plus },
            other => other,
        }
    }

    /// `|b|_a` for Randers norms, zero otherwise.
    pub fn drift_norm(&self) -> f64 {
        match *self {
            NormDescriptor::Randers { a, b, .. } => a.inverse().unwrap().quad(b).sqrt(),
            _ => 0.0,
        }
    }

    /// `F(y)`.
    pub fn norm(&self, y: Vec2) -> f64 {
        let y = self.project(y);
        match *self {
            NormDescriptor::Euclidean { .. } => norm2(y),
            NormDescriptor::Riemannian { a, .. } => a.quad(y).max(0.0).sqrt(),
            NormDescriptor::Randers { a, b, .. } => a.quad(y).max(0.0).sqrt() + dot(b, y),
            NormDescriptor::Asym1D { plus, minus } => {
                if y[0] >= 0.0 {
                    plus * y[0]
                } else {
                    -minus * y[0]
                }
            }
        }
    }

    /// Dual norm `F*(xi) = sup { xi(y) : F(y) = 1 }` in closed form.
    pub fn dual_norm(&self, xi: Vec2) -> f64 {
        let xi = self.project(xi);
        match *self {
            NormDescriptor::Euclidean { .. } => norm2(xi),
            NormDescriptor::Riemannian { a, .. } => a.inverse().unwrap().quad(xi).max(0.0).sqrt(),
            NormDescriptor::Randers { a, b, .. } => {
                let ainv = a.inverse().unwrap();
                let bb = ainv.quad(b);
                let q = ainv.quad(xi);
                let p = ainv.bilinear(xi, b);
                let s = 1.0 - bb;
                (((s * q + p * p).max(0.0)).sqrt() - p) / s
            }
            NormDescriptor::Asym1D { plus, minus } => {
                if xi[0] >= 0.0 {
                    xi[0] / plus
                } else {
                    -xi[0] / minus
                }
            }
        }
    }

    /// Quadratic part used where the gradient vanishes.
    pub fn riemannian_part(&self) -> Sym2 {
        match *self {
            NormDescriptor::Euclidean { .. } => Sym2::IDENTITY,
            NormDescriptor::Riemannian { a, .. } | NormDescriptor::Randers { a, .. } => a,
            NormDescriptor::Asym1D { plus, minus } => Sym2::scalar(0.25 * (plus + minus).powi(2)),
        }
    }

    pub fn fallback_tensor(&self, fallback: DegenerateFallback) -> Sym2 {
        match fallback {
            DegenerateFallback::RiemannianPart => self.riemannian_part(),
            DegenerateFallback::Identity => Sym2::IDENTITY,
        }
    }

    /// Fundamental tensor `g_v = Hess(F^2 / 2)` at `v`.
    pub fn fundamental_tensor(&self, v: Vec2) -> Result<Sym2> {
        let v = self.project(v);
        let f = self.norm(v);
        if !(f > EPS_GRAD) {
            return Err(Error::DegenerateVector { norm: f });
        }
        Ok(match *self {
            NormDescriptor::Euclidean { .. } => Sym2::IDENTITY,
            NormDescriptor::Riemannian { a, .. } => a,
            NormDescriptor::Randers { dim, a, b } => {
                let alpha = a.quad(v).sqrt();
                let l = scale(1.0 / alpha, a.apply(v));
                let lb = add(l, b);
                let g = a.sub(Sym2::outer(l)).scaled(f / alpha).add(Sym2::outer(lb));
                if dim == 1 {
                    Sym2::scalar(g.xx)
                } else {
                    g
                }
            }
            NormDescriptor::Asym1D { plus, minus } => {
                let p = if v[0] > 0.0 { plus } else { minus };
                Sym2::scalar(p * p)
            }
        })
    }

    /// `y -> g_y(y, .)`, the inverse of the Legendre map.
    pub fn legendre_inverse(&self, y: Vec2) -> Result<Vec2> {
        let y = self.project(y);
        if self.norm(y) <= EPS_GRAD {
            return Ok([0.0, 0.0]);
        }
        Ok(match *self {
            NormDescriptor::Euclidean { .. } => y,
            NormDescriptor::Riemannian { a, .. } => a.apply(y),
            NormDescriptor::Randers { a, b, .. } => {
                let alpha = a.quad(y).sqrt();
                let f = alpha + dot(b, y);
                self.project(scale(f, add(scale(1.0 / alpha, a.apply(y)), b)))
            }
            NormDescriptor::Asym1D { .. } => self.fundamental_tensor(y)?.apply(y),
        })
    }

    /// Legendre map: the vector `y` with `F(y) = F*(xi)` and `xi(y) = F(y)^2`.
    pub fn legendre(&self, xi: Vec2) -> Result<Vec2> {
        let xi = self.project(xi);
        if norm2(xi) == 0.0 {
            return Ok([0.0, 0.0]);
        }
        match *self {
            NormDescriptor::Euclidean { .. } => Ok(xi),
            NormDescriptor::Riemannian { a, .. } => Ok(a.inverse().unwrap().apply(xi)),
            NormDescriptor::Asym1D { plus, minus } => {
                let p = if xi[0] >= 0.0 { plus } else { minus };
                Ok([xi[0] / (p * p), 0.0])
            }
            NormDescriptor::Randers { a, .. } => self.randers_newton(a, xi),
        }
    }

    fn randers_newton(&self, a: Sym2, xi: Vec2) -> Result<Vec2> {
        let target = norm2(xi);
        let residual = |y: Vec2| -> Result<Vec2> { Ok(sub(self.legendre_inverse(y)?, xi)) };
        let mut y = self.project(a.inverse().unwrap().apply(xi));
        let mut r = residual(y)?;
        let mut rn = norm2(r);
        for it in 0..NEWTON_MAX_ITER {
            if rn <= NEWTON_TOL * target {
                return Ok(y);
            }
            let g = self.fundamental_tensor(y)?;
            let step = g.solve(r).ok_or(Error::NoConvergence { residual: rn, iterations: it })?;
            let step = self.project(step);
            let mut lambda = 1.0;
            let mut accepted = None;
            for _ in 0..=NEWTON_MAX_HALVINGS {
                let cand = sub(y, scale(lambda, step));
                if self.norm(cand) > EPS_GRAD {
                    let rc = residual(cand)?;
                    let rcn = norm2(rc);
                    if rcn < rn {
                        accepted = Some((cand, rc, rcn));
                        break;
                    }
                }
                lambda *= 0.5;
            }
            match accepted {
                Some((cand, rc, rcn)) => {
                    y = cand;
                    r = rc;
                    rn = rcn;
                }
                None => break,
            }
        }
        if rn <= NEWTON_TOL * target {
            Ok(y)
        } else {
            Err(Error::NoConvergence { residual: rn, iterations: NEWTON_MAX_ITER })
        }
    }

    /// Inverse fundamental tensor at `v`, or the fallback when `v` is degenerate.
    /// The flag reports whether the fallback was used.
    pub fn diffusion_tensor(&self, v: Vec2, fallback: DegenerateFallback) -> (Sym2, bool) {
        match self.fundamental_tensor(v) {
            Ok(g) => (g.inverse().expect("fundamental tensor is positive definite"), false),
            Err(_) => (self.fallback_tensor(fallback).inverse().unwrap(), true),
        }
    }

    /// Unit directions used for sampling; two in one dimension.
    pub fn sample_directions(&self, samples: usize) -> Vec<Vec2> {
        if self.dim() == 1 {
            vec![[1.0, 0.0], [-1.0, 0.0]]
        } else {
            (0..samples)
                .map(|k| {
                    let th = std::f64::consts::TAU * k as f64 / samples as f64;
                    [th.cos(), th.sin()]
                })
                .collect()
        }
    }
}

/// `F*` computed by maximising `xi(y)` over sampled unit directions, polished
/// by golden section. Works for any family.
pub fn dual_norm_sampled(desc: &NormDescriptor, xi: Vec2, samples: usize) -> f64 {
    if desc.dim() == 1 {
        return desc
            .sample_directions(2)
            .into_iter()
            .map(|d| dot(xi, d) / desc.norm(d))
            .fold(f64::NEG_INFINITY, f64::max);
    }
    let obj = |th: f64| {
        let d = [th.cos(), th.sin()];
        dot(xi, d) / desc.norm(d)
    };
    polish_angle(obj, samples).1
}

fn polish_angle<F: Fn(f64) -> f64>(obj: F, samples: usize) -> (f64, f64) {
    let step = std::f64::consts::TAU / samples as f64;
    let (mut best_th, mut best) = (0.0, f64::NEG_INFINITY);
    for k in 0..samples {
        let th = k as f64 * step;
        let v = obj(th);
        if v > best {
            best = v;
            best_th = th;
        }
    }
    let (th, v) = golden_max(&obj, best_th - step, best_th + step, 1e-13);
    if v > best {
        (th, v)
    } else {
        (best_th, best)
    }
}

/// Per-node norm field on a torus grid.
#[derive(Clone, Debug)]
pub struct MetricField {
    grid: TorusGrid,
    storage: MetricStorage,
}

#[derive(Clone, Debug)]
enum MetricStorage {
    Uniform(NormDescriptor),
    PerNode(Vec<NormDescriptor>),
}

impl MetricField {
    pub fn uniform(grid: TorusGrid, desc: NormDescriptor) -> Result<Self> {
        if desc.dim() != grid.dim() {
            return Err(Error::InvalidDescriptor(format!(
                "descriptor dimension {} does not match grid dimension {}",
                desc.dim(),
                grid.dim()
            )));
        }
        Ok(MetricField { grid, storage: MetricStorage::Uniform(desc) })
    }

    pub fn from_fn<F: FnMut(Vec2) -> Result<NormDescriptor>>(grid: TorusGrid, mut f: F) -> Result<Self> {
        let mut nodes = Vec::with_capacity(grid.len());
        for i in 0..grid.len() {
            let d = f(grid.coords(i))?;
            if d.dim() != grid.dim() {
                return Err(Error::InvalidDescriptor("dimension mismatch".into()));
            }
            nodes.push(d);
        }
        Ok(MetricField { grid, storage: MetricStorage::PerNode(nodes) })
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn at(&self, node: usize) -> &NormDescriptor {
        match &self.storage {
            MetricStorage::Uniform(d) => d,
            MetricStorage::PerNode(v) => &v[node],
        }
    }

    pub fn as_uniform(&self) -> Option<&NormDescriptor> {
        match &self.storage {
            MetricStorage::Uniform(d) => Some(d),
            MetricStorage::PerNode(v) => {
                if v.iter().all(|d| d == &v[0]) {
                    Some(&v[0])
                } else {
                    None
                }
            }
        }
    }

    /// Distinct descriptors in node order.
    pub fn distinct(&self) -> Vec<NormDescriptor> {
        match &self.storage {
            MetricStorage::Uniform(d) => vec![*d],
            MetricStorage::PerNode(v) => {
                let mut out: Vec<NormDescriptor> = Vec::new();
                for d in v {
                    if !out.contains(d) {
                        out.push(*d);
                    }
                }
                out
            }
        }
    }
}

/// Reversibility and uniform smoothness/convexity constants.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricConstants {
    /// `sup F(-y) / F(y)`.
    pub lambda: f64,
    /// `sup g_V(y, y) / F(y)^2`.
    pub kappa: f64,
    /// `inf g_V(y, y) / F(y)^2`.
    pub kappa_star: f64,
}

impl MetricConstants {
    /// Checks `1 <= lambda <= min(sqrt(kappa), sqrt(1 / kappa_star))` up to `tol`.
    pub fn consistent(&self, tol: f64) -> bool {
        if !(self.kappa_star > 0.0) {
            return false;
        }
        let upper = self.kappa.sqrt().min((1.0 / self.kappa_star).sqrt());
        self.lambda >= 1.0 - tol && self.lambda <= upper + tol
    }
}

pub const DEFAULT_SAMPLES: usize = 4096;

/// Sampled metric constants over all nodes.
pub fn metric_constants(field: &MetricField, samples: usize) -> MetricConstants {
    let mut out = MetricConstants { lambda: 1.0, kappa: f64::NEG_INFINITY, kappa_star: f64::INFINITY };
    for desc in field.distinct() {
        let c = descriptor_constants(&desc, samples);
        out.lambda = out.lambda.max(c.lambda);
        out.kappa = out.kappa.max(c.kappa);
        out.kappa_star = out.kappa_star.min(c.kappa_star);
    }
    out
}

/// Sampled constants of a single norm.
pub fn descriptor_constants(desc: &NormDescriptor, samples: usize) -> MetricConstants {
    if desc.dim() == 1 {
        let dirs = desc.sample_directions(2);
        let mut lambda: f64 = 1.0;
        let (mut kap, mut kap_s) = (f64::NEG_INFINITY, f64::INFINITY);
        for &y in &dirs {
            lambda = lambda.max(desc.norm(scale(-1.0, y)) / desc.norm(y));
            for &v in &dirs {
                let r = desc.fundamental_tensor(v).unwrap().quad(y) / desc.norm(y).powi(2);
                kap = kap.max(r);
                kap_s = kap_s.min(r);
            }
        }
        return MetricConstants { lambda, kappa: kap, kappa_star: kap_s };
    }
    let dir = |th: f64| [th.cos(), th.sin()];
    let rev = |th: f64| desc.norm(scale(-1.0, dir(th))) / desc.norm(dir(th));
    let (_, lambda) = polish_angle(rev, samples);
    let ratio = |tv: f64, ty: f64| {
        let y = dir(ty);
        desc.fundamental_tensor(dir(tv)).unwrap().quad(y) / desc.norm(y).powi(2)
    };
    let kappa = extremise_pair(&ratio, samples, 1.0);
    let kappa_star = extremise_pair(&ratio, samples, -1.0);
    MetricConstants { lambda: lambda.max(1.0), kappa, kappa_star }
}

/// Maximise `sign * f(tv, ty)` over a sample grid, then polish coordinate-wise.
fn extremise_pair<F: Fn(f64, f64) -> f64>(f: &F, samples: usize, sign: f64) -> f64 {
    let n = (samples as f64).sqrt().ceil().max(16.0) as usize;
    let step = std::f64::consts::TAU / n as f64;
    let (mut bv, mut by, mut best) = (0.0, 0.0, f64::NEG_INFINITY);
    for i in 0..n {
        for j in 0..n {
            let (tv, ty) = (i as f64 * step, j as f64 * step);
            let v = sign * f(tv, ty);
            if v > best {
                best = v;
                bv = tv;
                by = ty;
            }
        }
    }
    let mut width = step;
    for _ in 0..6 {
        let (tv, v1) = golden_max(|t| sign * f(t, by), bv - width, bv + width, 1e-13);
        if v1 > best {
            best = v1;
            bv = tv;
        }
        let (ty, v2) = golden_max(|t| sign * f(bv, t), by - width, by + width, 1e-13);
        if v2 > best {
            best = v2;
            by = ty;
        }
        width *= 0.5;
    }
    sign * best
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn randers(b: Vec2) -> NormDescriptor {
        NormDescriptor::randers(2, Sym2::IDENTITY, b).unwrap()
    }

    #[test]
    fn rejects_inadmissible_randers() {
        assert!(NormDescriptor::randers(2, Sym2::IDENTITY, [1.0, 0.0]).is_err());
        assert!(NormDescriptor::riemannian(2, Sym2::new(1.0, 2.0, 1.0)).is_err());
        assert!(NormDescriptor::asym_1d(1.0, 0.0).is_err());
        assert!(NormDescriptor::euclidean(3).is_err());
    }

    #[test]
    fn randers_reversibility_constant() {
        let c = descriptor_constants(&randers([0.5, 0.0]), DEFAULT_SAMPLES);
        assert!((c.lambda - 3.0).abs() < 1e-6, "{}", c.lambda);
        assert!(c.consistent(1e-9));
    }

    #[test]
    fn convexity_constants_bracket_brute_force() {
        let d = NormDescriptor::randers(2, Sym2::new(1.5, 0.2, 0.8), [0.3, -0.1]).unwrap();
        let c = descriptor_constants(&d, DEFAULT_SAMPLES);
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for i in 0..180 {
            for j in 0..180 {
                let (tv, ty) = (i as f64 * std::f64::consts::TAU / 180.0, j as f64 * std::f64::consts::TAU / 180.0);
                let y = [ty.cos(), ty.sin()];
                let r = d.fundamental_tensor([tv.cos(), tv.sin()]).unwrap().quad(y) / d.norm(y).powi(2);
                lo = lo.min(r);
                hi = hi.max(r);
            }
        }
        assert!(c.kappa_star > 0.0 && c.kappa_star <= lo && c.kappa_star > lo - 1e-3, "{c:?} {lo}");
        assert!(c.kappa >= hi && c.kappa < hi + 1e-3, "{c:?} {hi}");
        assert!(c.consistent(1e-9));
    }

    #[test]
    fn asym_constants_are_tight() {
        let c = descriptor_constants(&NormDescriptor::asym_1d(2.0, 1.0).unwrap(), 16);
        assert_eq!(c.lambda, 2.0);
        assert_eq!(c.kappa, 4.0);
        assert_eq!(c.kappa_star, 0.25);
        assert!(c.consistent(1e-12));
    }

    #[test]
    fn asym_legendre_inverse_value() {
        let d = NormDescriptor::asym_1d(2.0, 1.0).unwrap();
        assert_eq!(d.legendre_inverse([1.0, 0.0]).unwrap(), [4.0, 0.0]);
        assert_eq!(d.legendre([4.0, 0.0]).unwrap(), [1.0, 0.0]);
    }

    #[test]
    fn euclidean_tensor_is_identity() {
        let d = NormDescriptor::euclidean(2).unwrap();
        assert_eq!(d.fundamental_tensor([0.3, -2.0]).unwrap(), Sym2::IDENTITY);
    }

    #[test]
    fn degenerate_vector_rejected() {
        let d = randers([0.2, 0.1]);
        assert!(matches!(d.fundamental_tensor([0.0, 0.0]), Err(Error::DegenerateVector { .. })));
        let (t, used) = d.diffusion_tensor([0.0, 0.0], DegenerateFallback::RiemannianPart);
        assert!(used);
        assert_eq!(t, Sym2::IDENTITY);
    }

    #[test]
    fn randers_tensor_matches_finite_difference_hessian() {
        let d = NormDescriptor::randers(2, Sym2::new(1.5, 0.2, 0.8), [0.3, -0.2]).unwrap();
        let v = [0.4, 0.9];
        let g = d.fundamental_tensor(v).unwrap();
        let e = 1e-4;
        let half_sq = |y: Vec2| 0.5 * d.norm(y).powi(2);
        let h = |i: usize, j: usize| {
            let mut pp = v;
            let mut pm = v;
            let mut mp = v;
            let mut mm = v;
            pp[i] += e;
            pp[j] += e;
            pm[i] += e;
            pm[j] -= e;
            mp[i] -= e;
            mp[j] += e;
            mm[i] -= e;
            mm[j] -= e;
            (half_sq(pp) - half_sq(pm) - half_sq(mp) + half_sq(mm)) / (4.0 * e * e)
        };
        assert!((g.xx - h(0, 0)).abs() < 1e-6);
        assert!((g.xy - h(0, 1)).abs() < 1e-6);
        assert!((g.yy - h(1, 1)).abs() < 1e-6);
    }

    #[test]
    fn closed_form_dual_matches_sampling() {
        let d = NormDescriptor::randers(2, Sym2::new(2.0, 0.3, 1.0), [0.4, 0.1]).unwrap();
        for xi in [[1.0, 0.0], [-0.3, 0.7], [0.2, -2.0]] {
            let a = d.dual_norm(xi);
            let b = dual_norm_sampled(&d, xi, 4096);
            assert!((a - b).abs() < 1e-10 * a.max(1.0), "{a} vs {b}");
        }
    }

    fn randers_strategy() -> impl Strategy<Value = NormDescriptor> {
        (0.5f64..2.0, -0.4f64..0.4, 0.5f64..2.0, 0.0f64..0.85, 0.0f64..std::f64::consts::TAU).prop_filter_map(
            "spd",
            |(xx, xy, yy, r, th)| {
                let a = Sym2::new(xx, xy, yy);
                if !a.is_positive_definite() {
                    return None;
                }
                // scale b so that |b|_a = r
                let dir = [th.cos(), th.sin()];
                let n = a.inverse().unwrap().quad(dir).sqrt();
                NormDescriptor::randers(2, a, scale(r / n, dir)).ok()
            },
        )
    }

    proptest! {
        #[test]
        fn legendre_roundtrip(d in randers_strategy(), x in -3.0f64..3.0, y in -3.0f64..3.0) {
            prop_assume!(x.abs() + y.abs() > 1e-3);
            let xi = [x, y];
            let v = d.legendre(xi).unwrap();
            let back = d.legendre_inverse(v).unwrap();
            prop_assert!(norm2(sub(back, xi)) <= 1e-10 * norm2(xi).max(1.0));
            // F(v) = F*(xi) and xi(v) = F(v)^2
            let f = d.norm(v);
            prop_assert!((f - d.dual_norm(xi)).abs() <= 1e-10 * f.max(1.0));
            prop_assert!((dot(xi, v) - f * f).abs() <= 1e-9 * (f * f).max(1.0));
        }

        #[test]
        fn tensor_is_positive_and_homogeneous(d in randers_strategy(), th in 0.0f64..std::f64::consts::TAU, s in 0.1f64..10.0) {
            let v = [th.cos(), th.sin()];
            let g = d.fundamental_tensor(v).unwrap();
            prop_assert!(g.is_positive_definite());
            let gs = d.fundamental_tensor(scale(s, v)).unwrap();
            prop_assert!((g.xx - gs.xx).abs() < 1e-10 && (g.xy - gs.xy).abs() < 1e-10);
            // Euler identity g_v(v, v) = F(v)^2
            prop_assert!((g.quad(v) - d.norm(v).powi(2)).abs() < 1e-12);
        }

        #[test]
        fn dual_is_bounded_by_pairing(d in randers_strategy(), t1 in 0.0f64..std::f64::consts::TAU, t2 in 0.0f64..std::f64::consts::TAU) {
            let xi = [t1.cos(), t1.sin()];
            let y = [t2.cos(), t2.sin()];
            prop_assert!(dot(xi, y) <= d.dual_norm(xi) * d.norm(y) + 1e-12);
        }
    }
}
