use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{gradient_field, gradient_norm_sq, log_gradient_energy};
use crate::heat::Trajectory;
use crate::semigroup::report::{disc_tolerance, InequalityReport};
use crate::semigroup::transport::{transport, weighted_forward_sum, TransportPlan};

/// Tolerance for checks that hold exactly up to linear-solver accuracy.
pub const STRUCTURAL_TOL: f64 = 1e-10;

/// `|K|` below which curvature-dependent factors use their `K = 0` limit.
pub const K_ZERO: f64 = 1e-10;

/// `(1 - e^{2 K d}) / (2 K)`, equal to `-d` at `K = 0`.
pub fn forward_logsob_factor(k: f64, d: f64) -> f64 {
    if k.abs() < K_ZERO {
        -d
    } else {
        -(2.0 * k * d).exp_m1() / (2.0 * k)
    }
}

/// `(e^{-2 K d} - 1) / (2 K)`, equal to `-d` at `K = 0`.
pub fn reverse_logsob_factor(k: f64, d: f64) -> f64 {
    if k.abs() < K_ZERO {
        -d
    } else {
        (-2.0 * k * d).exp_m1() / (2.0 * k)
    }
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn contraction_report(traj: &Trajectory, g: &[f64], pg: &[f64], p: f64) -> InequalityReport {
    let m = traj.measure();
    InequalityReport::relative(format!("contraction-L{p}"), vec![m.lp_norm(pg, p)], vec![m.lp_norm(g, p)], STRUCTURAL_TOL, 1.0)
        .with_grid(traj)
}

fn order_report(traj: &Trajectory, pg: &[f64], k1: f64, k2: f64) -> InequalityReport {
    let lhs: Vec<f64> = pg.iter().map(|v| (v - k2).max(k1 - v)).collect();
    let rhs = vec![0.0; lhs.len()];
    let tol = STRUCTURAL_TOL * k1.abs().max(k2.abs()).max(1.0);
    InequalityReport::new("order-bounds", lhs, rhs, tol).with_grid(traj).with_param("k1", k1).with_param("k2", k2)
}

fn squares(f: &[f64], g: &[f64]) -> [Vec<f64>; 3] {
    [
        f.iter().zip(g).map(|(a, b)| a * b).collect(),
        f.iter().map(|a| a * a).collect(),
        g.iter().map(|a| a * a).collect(),
    ]
}

fn cauchy_schwarz_report(traj: &Trajectory, pfg: &[f64], pff: &[f64], pgg: &[f64]) -> InequalityReport {
    let lhs = pfg.iter().map(|v| v * v).collect();
    let rhs = pff.iter().zip(pgg).map(|(a, b)| a * b).collect();
    InequalityReport::relative("cauchy-schwarz", lhs, rhs, STRUCTURAL_TOL, 1.0).with_grid(traj)
}

/// `|P g|_p <= |g|_p` in `L^p(m)`.
pub fn check_contraction(traj: &Trajectory, plan: TransportPlan, g: &[f64], p: f64) -> Result<InequalityReport> {
    let pg = transport(traj, plan, g)?;
    Ok(contraction_report(traj, g, &pg, p))
}

/// `k1 <= g <= k2` implies `k1 <= P g <= k2`. Entries are the signed
/// excursion outside `[k1, k2]`.
pub fn check_order_bounds(traj: &Trajectory, plan: TransportPlan, g: &[f64], k1: f64, k2: f64) -> Result<InequalityReport> {
    let pg = transport(traj, plan, g)?;
    Ok(order_report(traj, &pg, k1, k2))
}

/// `(P(fg))^2 <= P(f^2) P(g^2)` node-wise.
pub fn check_cauchy_schwarz(traj: &Trajectory, plan: TransportPlan, f: &[f64], g: &[f64]) -> Result<InequalityReport> {
    let [fg, ff, gg] = squares(f, g);
    let pfg = transport(traj, plan, &fg)?;
    let pff = transport(traj, plan, &ff)?;
    let pgg = transport(traj, plan, &gg)?;
    Ok(cauchy_schwarz_report(traj, &pfg, &pff, &pgg))
}

/// Structural checks for one pair of test fields on `[s, t]`, sharing transports:
/// constants preserved, adjoint mass, duality, semigroup law through `r`
/// (skipped unless `s < r < t`), contraction in `L^1`, `L^2`, `L^inf`, order
/// bounds for `f` and Cauchy-Schwarz. Exact identities are reported relative to
/// the field size with tolerance `identity_tol`.
pub fn structural_suite(
    traj: &Trajectory,
    s: usize,
    r: usize,
    t: usize,
    f: &[f64],
    g: &[f64],
    identity_tol: f64,
) -> Result<Vec<InequalityReport>> {
    let fwd = TransportPlan::forward(s, t);
    fwd.validate(traj)?;
    let m = traj.measure();
    let mass = m.total_mass();
    let ones = vec![1.0; f.len()];
    let identity = |name: &str, value: f64| {
        InequalityReport::new(name, vec![value], vec![0.0], identity_tol).with_grid(traj)
    };
    let mut out = Vec::new();
    let p1 = transport(traj, fwd, &ones)?;
    out.push(identity("constants-preserved", p1.iter().fold(0.0f64, |a, v| a.max((v - 1.0).abs()))));
    let q1 = transport(traj, TransportPlan::adjoint(s, t), &ones)?;
    out.push(identity("adjoint-mass", (m.integrate(&q1) - mass).abs() / mass));
    let pf = transport(traj, fwd, f)?;
    let qg = transport(traj, TransportPlan::adjoint(s, t), g)?;
    let duality = (m.inner(g, &pf) - m.inner(f, &qg)).abs() / (sup(f) * sup(g) * mass).max(f64::MIN_POSITIVE);
    out.push(identity("duality-gap", duality));
    if s < r && r < t {
        let a = transport(traj, TransportPlan::forward(s, r), f)?;
        let a = transport(traj, TransportPlan::forward(r, t), &a)?;
        let gap = a.iter().zip(&pf).fold(0.0f64, |acc, (x, y)| acc.max((x - y).abs()));
        out.push(identity("semigroup-law", gap / sup(f).max(f64::MIN_POSITIVE)));
    }
    for p in [1.0, 2.0, f64::INFINITY] {
        out.push(contraction_report(traj, f, &pf, p));
    }
    let (lo, hi) = f.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(*v), b.max(*v)));
    out.push(order_report(traj, &pf, lo, hi));
    let [fg, ff, gg] = squares(f, g);
    out.push(cauchy_schwarz_report(traj, &transport(traj, fwd, &fg)?, &transport(traj, fwd, &ff)?, &transport(traj, fwd, &gg)?));
    Ok(out)
}

/// `| int psi P_{s,t} g dm - int g P^_{t,s} psi dm |`.
pub fn duality_gap(traj: &Trajectory, s: usize, t: usize, g: &[f64], psi: &[f64]) -> Result<f64> {
    let pg = transport(traj, TransportPlan::forward(s, t), g)?;
    let ppsi = transport(traj, TransportPlan::adjoint(s, t), psi)?;
    let m = traj.measure();
    Ok((m.inner(psi, &pg) - m.inner(g, &ppsi)).abs())
}

/// `| P_{r,t} P_{s,r} g - P_{s,t} g |_inf`.
pub fn semigroup_law_gap(traj: &Trajectory, s: usize, r: usize, t: usize, g: &[f64]) -> Result<f64> {
    let a = transport(traj, TransportPlan::forward(s, r), g)?;
    let a = transport(traj, TransportPlan::forward(r, t), &a)?;
    let b = transport(traj, TransportPlan::forward(s, t), g)?;
    Ok(a.iter().zip(&b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())))
}

/// Relative mass drift over the whole run.
pub fn check_conservation(traj: &Trajectory, rel_tol: f64) -> InequalityReport {
    InequalityReport::new("conservation", vec![traj.mass_drift()], vec![0.0], rel_tol).with_grid(traj)
}

/// Both sides of the variance identity for `f = u_s`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VarianceIdentity {
    /// `(P f)^2 - P(f^2)`.
    pub lhs: Vec<f64>,
    /// `-2 int_s^t P_{sigma,t}(F^2(grad u_sigma)) d sigma` (trapezoid rule).
    pub rhs: Vec<f64>,
    /// `|lhs - rhs|_inf / |rhs|_inf`.
    pub relative_gap: f64,
}

pub fn variance_identity(traj: &Trajectory, plan: TransportPlan) -> Result<VarianceIdentity> {
    plan.validate(traj)?;
    let (s, t) = (plan.s, plan.t);
    let f = traj.state(s);
    let ut = transport(traj, TransportPlan::forward(s, t), f)?;
    let f2: Vec<f64> = f.iter().map(|v| v * v).collect();
    let pf2 = transport(traj, TransportPlan::forward(s, t), &f2)?;
    let lhs: Vec<f64> = ut.iter().zip(&pf2).map(|(a, b)| a * a - b).collect();
    let dt = traj.dt();
    let n = t - s;
    let mut weights = vec![dt; n + 1];
    weights[0] = 0.5 * dt;
    weights[n] = 0.5 * dt;
    let q: Vec<Vec<f64>> = (s..=t).map(|k| gradient_norm_sq(traj.metric(), traj.state(k))).collect();
    let integral = weighted_forward_sum(traj, s, t, &weights, &q)?;
    let rhs: Vec<f64> = integral.iter().map(|v| -2.0 * v).collect();
    let gap = lhs.iter().zip(&rhs).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    Ok(VarianceIdentity { relative_gap: gap / sup(&rhs).max(f64::MIN_POSITIVE), lhs, rhs })
}

/// `| A_t u_t - P_{s,t}(A_s u_s) |_inf / |A_t u_t|_inf`.
pub fn laplacian_commutation(traj: &Trajectory, plan: TransportPlan) -> Result<f64> {
    plan.validate(traj)?;
    let at = traj.time_derivative(plan.t);
    let ps = transport(traj, TransportPlan::forward(plan.s, plan.t), &traj.time_derivative(plan.s))?;
    let gap = at.iter().zip(&ps).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    Ok(gap / sup(&at).max(f64::MIN_POSITIVE))
}

/// Gradient estimates under `Ric_inf >= K`:
/// `u_t F^2(grad log u_t) <= e^{-2K(t-s)} P_{s,t}(u_s F^2(grad log u_s))` and
/// `F^2(grad u_t) <= e^{-2K(t-s)} P_{s,t}(F^2(grad u_s))`.
pub fn gradient_estimate_check(traj: &Trajectory, plan: TransportPlan, k: f64) -> Result<[InequalityReport; 2]> {
    plan.validate(traj)?;
    let (s, t) = (plan.s, plan.t);
    let factor = (-2.0 * k * plan.span(traj)).exp();
    let fwd = TransportPlan::forward(s, t);
    let metric = traj.metric();
    let tol = disc_tolerance(traj);
    let e_t = log_gradient_energy(metric, traj.state(t));
    let pe = transport(traj, fwd, &log_gradient_energy(metric, traj.state(s)))?;
    let r1 = InequalityReport::relative("gradient-estimate-log", e_t, pe.iter().map(|v| factor * v).collect(), tol, 0.0);
    let g_t = gradient_norm_sq(metric, traj.state(t));
    let pg = transport(traj, fwd, &gradient_norm_sq(metric, traj.state(s)))?;
    let r2 = InequalityReport::relative("gradient-estimate", g_t, pg.iter().map(|v| factor * v).collect(), tol, 0.0);
    let tag = |r: InequalityReport| {
        r.with_grid(traj).with_param("K", k).with_param("s", traj.time(s)).with_param("t", traj.time(t))
    };
    Ok([tag(r1), tag(r2)])
}

fn entropy_density(u: &[f64]) -> Vec<f64> {
    u.iter().map(|v| v * v.ln()).collect()
}

/// Local log-Sobolev inequalities in both directions under `Ric_inf >= K`.
///
/// Forward: `u_t log u_t - P(u_s log u_s) <= (1 - e^{2K d}) / (2K) * u_t F^2(grad log u_t)`.
/// Reverse: `u_t log u_t - P(u_s log u_s) >= (e^{-2K d} - 1) / (2K) * P(u_s F^2(grad log u_s))`.
pub fn local_logsob_check(traj: &Trajectory, plan: TransportPlan, k: f64) -> Result<[InequalityReport; 2]> {
    plan.validate(traj)?;
    let (s, t) = (plan.s, plan.t);
    let d = plan.span(traj);
    let fwd = TransportPlan::forward(s, t);
    let metric = traj.metric();
    let ut = traj.state(t);
    let p_ent = transport(traj, fwd, &entropy_density(traj.state(s)))?;
    let diff: Vec<f64> = entropy_density(ut).iter().zip(&p_ent).map(|(a, b)| a - b).collect();
    let e_t = log_gradient_energy(metric, ut);
    let pe = transport(traj, fwd, &log_gradient_energy(metric, traj.state(s)))?;
    let cf = forward_logsob_factor(k, d);
    let cr = reverse_logsob_factor(k, d);
    let tol = disc_tolerance(traj);
    let r1 = InequalityReport::relative("local-log-sobolev", diff.clone(), e_t.iter().map(|v| cf * v).collect(), tol, 0.0);
    let r2 = InequalityReport::relative(
        "reverse-local-log-sobolev",
        pe.iter().map(|v| cr * v).collect(),
        diff,
        tol,
        0.0,
    );
    let tag = |r: InequalityReport| {
        r.with_grid(traj).with_param("K", k).with_param("s", traj.time(s)).with_param("t", traj.time(t))
    };
    Ok([tag(r1), tag(r2)])
}

/// `sup F*(du)` over nodes.
pub fn lipschitz_constant(traj: &Trajectory, k: usize) -> f64 {
    gradient_norm_sq(traj.metric(), traj.state(k)).iter().fold(0.0f64, |m, v| m.max(v.sqrt()))
}

/// `sup F(grad u)` computed through the Legendre map.
pub fn gradient_sup(traj: &Trajectory, k: usize) -> Result<f64> {
    let (v, _) = gradient_field(traj.metric(), traj.state(k))?;
    Ok(v.iter().enumerate().fold(0.0f64, |m, (i, y)| m.max(traj.metric().at(i).norm(*y))))
}

/// Lipschitz decay `|F(grad u_t)|_inf <= e^{-Kt} |F(grad u_0)|_inf` at every
/// recorded time, once through `F*(du)` and once through `F(grad u)`.
pub fn lipschitz_decay(traj: &Trajectory, k: f64) -> Result<[InequalityReport; 2]> {
    let tol = disc_tolerance(traj);
    let lip0 = lipschitz_constant(traj, 0);
    let grad0 = gradient_sup(traj, 0)?;
    let mut l1 = Vec::new();
    let mut r1 = Vec::new();
    let mut l2 = Vec::new();
    let mut r2 = Vec::new();
    for i in 1..traj.len() {
        let f = (-k * traj.time(i)).exp();
        l1.push(lipschitz_constant(traj, i));
        r1.push(f * lip0);
        l2.push(gradient_sup(traj, i)?);
        r2.push(f * grad0);
    }
    Ok([
        InequalityReport::relative("lipschitz-decay", l1, r1, tol, 0.0).with_grid(traj).with_param("K", k),
        InequalityReport::relative("gradient-sup-decay", l2, r2, tol, 0.0).with_grid(traj).with_param("K", k),
    ])
}
