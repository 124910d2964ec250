use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::log_gradient_energy;
use crate::heat::Trajectory;
use crate::liyau::psi::PsiEvaluator;
use crate::semigroup::{adjoint_sweep, disc_tolerance, transport, InequalityReport, TransportPlan, K_ZERO};

/// Smallest admissible `min u / max u` for entropy functionals.
pub const MIN_RATIO: f64 = 1e-8;

fn check_positive(u: &[f64]) -> Result<()> {
    let (lo, hi) = u.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(*v), hi.max(v.abs())));
    if !(lo > 0.0) || lo < MIN_RATIO * hi {
        return Err(Error::DomainError { x: lo / hi, limit: MIN_RATIO });
    }
    Ok(())
}

fn check_test_field(traj: &Trajectory, phi: &[f64]) -> Result<()> {
    if phi.len() != traj.grid().len() || phi.iter().any(|v| !(*v >= 0.0)) {
        return Err(Error::InvalidGrid("test field must be nonnegative with one value per node".into()));
    }
    Ok(())
}

fn entropy_density(u: &[f64]) -> Vec<f64> {
    u.iter().map(|v| v * v.ln()).collect()
}

/// `H(sigma) = int phi P_{sigma,t}(u_sigma log u_sigma) dm` for `sigma = 0..=t`,
/// with its forward difference and the entropy production formula.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EntropyProfile {
    pub times: Vec<f64>,
    pub h: Vec<f64>,
    /// `(H(sigma_{k+1}) - H(sigma_k)) / dt`.
    pub difference: Vec<f64>,
    /// `-int phi P_{sigma,t}(u F^2(grad log u)) dm` averaged over the two ends of each step.
    pub production: Vec<f64>,
    /// `max |difference - production| / max |production|`.
    pub relative_gap: f64,
}

pub fn entropy_profile(traj: &Trajectory, t: usize, phi: &[f64]) -> Result<EntropyProfile> {
    check_test_field(traj, phi)?;
    let sweep = adjoint_sweep(traj, t, phi)?;
    let measure = traj.measure();
    let mut h = Vec::with_capacity(t + 1);
    let mut prod = Vec::with_capacity(t + 1);
    for (k, w) in sweep.iter().enumerate() {
        let u = traj.state(k);
        check_positive(u)?;
        h.push(measure.inner(&entropy_density(u), w));
        prod.push(-measure.inner(&log_gradient_energy(traj.metric(), u), w));
    }
    let dt = traj.dt();
    let difference: Vec<f64> = h.windows(2).map(|p| (p[1] - p[0]) / dt).collect();
    let production: Vec<f64> = prod.windows(2).map(|p| 0.5 * (p[0] + p[1])).collect();
    let gap = difference.iter().zip(&production).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    let scale = production.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let relative_gap = if scale > 0.0 { gap / scale } else { gap };
    Ok(EntropyProfile { times: traj.times()[..=t].to_vec(), h, difference, production, relative_gap })
}

/// Integrals shared by the weak log-Sobolev family over `[s, t]`.
struct WeakTerms {
    zeta: f64,
    d: f64,
    /// `int phi (u_t log u_t - P(u_s log u_s))`.
    entropy: f64,
    /// `int phi d_t u_t`.
    flux: f64,
    /// `int phi u_t`.
    mass: f64,
    /// `int phi u_t F^2(grad log u_t)`.
    energy_t: f64,
    /// `int phi P(u_s F^2(grad log u_s))`.
    energy_s: f64,
    /// `int phi P(d_t u_s)`.
    flux_s: f64,
}

fn weak_terms(traj: &Trajectory, s: usize, t: usize, phi: &[f64], n: f64) -> Result<WeakTerms> {
    check_test_field(traj, phi)?;
    let plan = TransportPlan::forward(s, t);
    plan.validate(traj)?;
    if !(n.is_finite() && n > 0.0) {
        return Err(Error::InvalidDescriptor(format!("weak log-Sobolev checks need finite N, got {n}")));
    }
    let (us, ut) = (traj.state(s), traj.state(t));
    check_positive(us)?;
    check_positive(ut)?;
    let m = traj.measure();
    let metric = traj.metric();
    let p_ent = transport(traj, plan, &entropy_density(us))?;
    let ent_t = entropy_density(ut);
    let diff: Vec<f64> = ent_t.iter().zip(&p_ent).map(|(a, b)| a - b).collect();
    let mass = m.inner(phi, ut);
    Ok(WeakTerms {
        zeta: 2.0 / (n * mass),
        d: plan.span(traj),
        entropy: m.inner(phi, &diff),
        flux: m.inner(phi, &traj.time_derivative(t)),
        mass,
        energy_t: m.inner(phi, &log_gradient_energy(metric, ut)),
        energy_s: m.inner(phi, &transport(traj, plan, &log_gradient_energy(metric, us))?),
        flux_s: m.inner(phi, &transport(traj, plan, &traj.time_derivative(s))?),
    })
}

fn scalar_report(name: &str, lhs: f64, rhs: f64, traj: &Trajectory) -> InequalityReport {
    InequalityReport::relative(name, vec![lhs], vec![rhs], disc_tolerance(traj), 0.0).with_grid(traj)
}

/// The three exponential entropy inequalities under a nonnegative curvature bound.
pub fn check_exp_uu(traj: &Trajectory, s: usize, t: usize, phi: &[f64], n: f64) -> Result<[InequalityReport; 3]> {
    let w = weak_terms(traj, s, t, phi, n)?;
    let e = w.entropy + w.d * w.flux;
    // int phi u Delta log u = int phi (d_t u - u F^2(grad log u))
    let lap_log_t = w.flux - w.energy_t;
    let lap_log_s = w.flux_s - w.energy_s;
    let tag = |r: InequalityReport| {
        r.with_param("s", traj.time(s)).with_param("t", traj.time(t)).with_param("N", n).with_param("zeta", w.zeta)
    };
    Ok([
        tag(scalar_report("entropy-exp-upper", (w.zeta * e).exp(), 1.0 + w.d * w.zeta * lap_log_t, traj)),
        tag(scalar_report("entropy-exp-lower", (-w.zeta * e).exp(), 1.0 - w.d * w.zeta * lap_log_s, traj)),
        tag(scalar_report("entropy-commutation", lap_log_s * (1.0 + w.zeta * w.d * lap_log_t), lap_log_t, traj)),
    ])
}

/// `chi = (4 / (N K)) int phi d_t u / int phi u` on `[s, t]`.
pub fn weak_chi(traj: &Trajectory, s: usize, t: usize, phi: &[f64], k: f64, n: f64) -> Result<f64> {
    let w = weak_terms(traj, s, t, phi, n)?;
    Ok(4.0 / (n * k) * w.flux / w.mass)
}

/// Weak log-Sobolev pair under `Ric_N >= K`, `K != 0`, on `[s, t]`, preceded by the
/// bound `chi < 1 + pi^2 / (K^2 (t - s)^2)`.
pub fn check_log_sob_weak(
    traj: &Trajectory,
    s: usize,
    t: usize,
    phi: &[f64],
    k: f64,
    n: f64,
) -> Result<[InequalityReport; 3]> {
    if k.abs() < K_ZERO {
        return Err(Error::InvalidDescriptor("weak log-Sobolev pair needs K != 0; use check_exp_uu".into()));
    }
    let w = weak_terms(traj, s, t, phi, n)?;
    let psi = PsiEvaluator::new(n, k, w.d)?;
    let chi = 4.0 / (n * k) * w.flux / w.mass;
    let limit = psi.upper_limit();
    let bound = InequalityReport::new("weak-chi-bound", vec![chi], vec![limit], 0.0).with_grid(traj);
    let (sf, p, pt) = match (psi.sinc_factor(chi), psi.value(chi), psi.tilde(chi)) {
        (Ok(a), Ok(b), Ok(c)) => (a, b, c),
        _ => (f64::NAN, f64::NAN, f64::NAN),
    };
    let kd = k * w.d;
    let lhs1 = (w.zeta * w.entropy + 0.5 * kd * chi - kd).exp();
    let rhs1 = sf * (-w.zeta * w.energy_t + p);
    let lhs2 = (-w.zeta * w.entropy - 0.5 * kd * chi + kd).exp();
    let rhs2 = sf * (w.zeta * w.energy_s + pt);
    let tag = |r: InequalityReport| {
        r.with_param("s", traj.time(s))
            .with_param("t", traj.time(t))
            .with_param("N", n)
            .with_param("K", k)
            .with_param("chi", chi)
    };
    Ok([
        tag(bound),
        tag(scalar_report("weak-reverse-log-sobolev", lhs1, rhs1, traj)),
        tag(scalar_report("weak-log-sobolev", lhs2, rhs2, traj)),
    ])
}
