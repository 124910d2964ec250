use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{MeasureField, TorusGrid};
use crate::heat::assembly::{assemble_for_state, CgStats, DiffusionAssembly};
use crate::metric::{DegenerateFallback, MetricField};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    #[default]
    ImplicitEuler,
    CrankNicolson,
    Explicit,
}

/// Relative CG residual used unless overridden.
pub const DEFAULT_CG_TOL: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeatFlowOptions {
    pub dt: f64,
    pub t_end: f64,
    #[serde(default)]
    pub scheme: Scheme,
    #[serde(default = "default_cg_tol")]
    pub cg_tol: f64,
    #[serde(default)]
    pub fallback: DegenerateFallback,
}

fn default_cg_tol() -> f64 {
    DEFAULT_CG_TOL
}

impl HeatFlowOptions {
    pub fn new(dt: f64, t_end: f64) -> Self {
        HeatFlowOptions { dt, t_end, scheme: Scheme::default(), cg_tol: DEFAULT_CG_TOL, fallback: DegenerateFallback::default() }
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_fallback(mut self, fallback: DegenerateFallback) -> Self {
        self.fallback = fallback;
        self
    }

    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round().max(1.0) as usize
    }
}

/// Stable explicit step bound `h^2 / (2 dim kappa_max)`.
pub fn explicit_step_limit(a: &DiffusionAssembly) -> f64 {
    let g = a.grid();
    g.spacing().powi(2) / (2.0 * g.dim() as f64 * a.max_diffusivity())
}

/// Apply one step of `scheme` with the frozen operator `a`.
pub fn propagate(a: &DiffusionAssembly, scheme: Scheme, dt: f64, u: &[f64], tol: f64) -> Result<(Vec<f64>, CgStats)> {
    match scheme {
        Scheme::ImplicitEuler => a.solve_shifted(dt, u, tol),
        Scheme::CrankNicolson => {
            let au = a.apply(u);
            let rhs: Vec<f64> = u.iter().zip(&au).map(|(v, w)| v + 0.5 * dt * w).collect();
            a.solve_shifted(0.5 * dt, &rhs, tol)
        }
        Scheme::Explicit => {
            let limit = explicit_step_limit(a);
            if dt > limit {
                return Err(Error::CflViolation { dt, limit });
            }
            let au = a.apply(u);
            Ok((u.iter().zip(&au).map(|(v, w)| v + dt * w).collect(), CgStats::default()))
        }
    }
}

/// One heat step from `u`; returns the new state and the operator used.
pub fn heat_step(
    metric: &MetricField,
    measure: &MeasureField,
    u: &[f64],
    dt: f64,
    scheme: Scheme,
) -> Result<(Vec<f64>, DiffusionAssembly)> {
    let a = assemble_for_state(metric, measure, u, DegenerateFallback::default())?;
    let (next, _) = propagate(&a, scheme, dt, u, DEFAULT_CG_TOL)?;
    Ok((next, a))
}

/// Node where a state went negative.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositivityViolation {
    pub step: usize,
    pub node: usize,
    pub value: f64,
}

/// Recorded heat flow: states and the operator assembled at each time.
#[derive(Clone, Debug)]
pub struct Trajectory {
    metric: MetricField,
    measure: MeasureField,
    options: HeatFlowOptions,
    times: Vec<f64>,
    states: Vec<Vec<f64>>,
    operators: Vec<DiffusionAssembly>,
    cg: Vec<CgStats>,
    positivity: Vec<PositivityViolation>,
}

/// Run the heat flow from `u0` up to `options.t_end`.
pub fn solve_heat_flow(
    metric: &MetricField,
    measure: &MeasureField,
    u0: &[f64],
    options: HeatFlowOptions,
) -> Result<Trajectory> {
    if u0.len() != metric.grid().len() {
        return Err(Error::InvalidGrid("initial datum has the wrong length".into()));
    }
    let steps = options.steps();
    let mut traj = Trajectory {
        metric: metric.clone(),
        measure: measure.clone(),
        options,
        times: vec![0.0],
        states: vec![u0.to_vec()],
        operators: Vec::with_capacity(steps + 1),
        cg: Vec::with_capacity(steps),
        positivity: Vec::new(),
    };
    traj.log_positivity(0, u0);
    for k in 0..steps {
        let a = assemble_for_state(metric, measure, &traj.states[k], options.fallback)?;
        let (next, stats) = propagate(&a, options.scheme, options.dt, &traj.states[k], options.cg_tol)?;
        traj.operators.push(a);
        traj.cg.push(stats);
        traj.log_positivity(k + 1, &next);
        traj.states.push(next);
        traj.times.push((k + 1) as f64 * options.dt);
    }
    let last = assemble_for_state(metric, measure, &traj.states[steps], options.fallback)?;
    traj.operators.push(last);
    Ok(traj)
}

impl Trajectory {
    fn log_positivity(&mut self, step: usize, u: &[f64]) {
        for (node, &value) in u.iter().enumerate() {
            if value <= 0.0 {
                self.positivity.push(PositivityViolation { step, node, value });
            }
        }
    }

    pub fn metric(&self) -> &MetricField {
        &self.metric
    }

    pub fn measure(&self) -> &MeasureField {
        &self.measure
    }

    pub fn grid(&self) -> &TorusGrid {
        self.metric.grid()
    }

    pub fn options(&self) -> &HeatFlowOptions {
        &self.options
    }

    pub fn dt(&self) -> f64 {
        self.options.dt
    }

    /// Number of recorded time levels (steps + 1).
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn last_index(&self) -> usize {
        self.states.len() - 1
    }

    pub fn time(&self, k: usize) -> f64 {
        self.times[k]
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn state(&self, k: usize) -> &[f64] {
        &self.states[k]
    }

    /// Operator assembled from `u_k`.
    pub fn operator(&self, k: usize) -> &DiffusionAssembly {
        &self.operators[k]
    }

    pub fn cg_stats(&self) -> &[CgStats] {
        &self.cg
    }

    pub fn positivity_violations(&self) -> &[PositivityViolation] {
        &self.positivity
    }

    /// Index of the recorded time closest to `t`.
    pub fn index_at(&self, t: f64) -> usize {
        let k = (t / self.options.dt).round();
        (k.max(0.0) as usize).min(self.last_index())
    }

    /// Apply the step operator `k -> k + 1` to an arbitrary field.
    pub fn apply_step(&self, k: usize, x: &[f64]) -> Result<Vec<f64>> {
        if k >= self.last_index() {
            return Err(Error::IndexRange(format!("step {k} beyond the last step {}", self.last_index() - 1)));
        }
        Ok(propagate(&self.operators[k], self.options.scheme, self.options.dt, x, self.options.cg_tol)?.0)
    }

    /// `d/dt u` at level `k`, defined as `A_k u_k`.
    pub fn time_derivative(&self, k: usize) -> Vec<f64> {
        self.operators[k].apply(&self.states[k])
    }

    /// `d/dt log u = (A_k u_k) / u_k`.
    pub fn log_time_derivative(&self, k: usize) -> Vec<f64> {
        self.time_derivative(k).iter().zip(&self.states[k]).map(|(d, u)| d / u).collect()
    }

    pub fn mass(&self, k: usize) -> f64 {
        self.measure.integrate(&self.states[k])
    }

    /// Largest relative mass drift over the run.
    pub fn mass_drift(&self) -> f64 {
        let m0 = self.mass(0);
        (0..self.len()).map(|k| ((self.mass(k) - m0) / m0.abs().max(f64::MIN_POSITIVE)).abs()).fold(0.0, f64::max)
    }

    /// Total fallback-tensor uses over all recorded operators.
    pub fn degenerate_node_uses(&self) -> usize {
        self.operators.iter().map(|a| a.degenerate_nodes()).sum()
    }

    pub fn nonmonotone_cells(&self) -> usize {
        self.operators.iter().map(|a| a.nonmonotone_cells()).max().unwrap_or(0)
    }
}
