use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::heat::Trajectory;

/// Version of the serialised report layout.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridMeta {
    pub dim: usize,
    pub nodes: usize,
    pub period: f64,
    pub spacing: f64,
    pub dt: f64,
}

impl GridMeta {
    pub fn of(traj: &Trajectory) -> Self {
        let g = traj.grid();
        GridMeta { dim: g.dim(), nodes: g.nodes(), period: g.period(), spacing: g.spacing(), dt: traj.dt() }
    }
}

/// Outcome of checking `lhs <= rhs` entry-wise.
///
/// The check holds where `lhs - rhs <= tolerance`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InequalityReport {
    pub schema_version: u32,
    pub name: String,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    pub worst_residual: f64,
    pub worst_index: usize,
    pub violation_count: usize,
    pub tolerance: f64,
    pub scale: f64,
    pub grid: Option<GridMeta>,
    pub params: BTreeMap<String, f64>,
}

fn field_scale(lhs: &[f64], rhs: &[f64]) -> f64 {
    lhs.iter().chain(rhs).fold(0.0f64, |m, v| m.max(v.abs()))
}

/// Discretisation tolerance `max(10 h^2, 10 dt)` relative to the field scale.
pub fn disc_tolerance(traj: &Trajectory) -> f64 {
    let h = traj.grid().spacing();
    (10.0 * h * h).max(10.0 * traj.dt())
}

impl InequalityReport {
    /// Absolute tolerance.
    pub fn new(name: impl Into<String>, lhs: Vec<f64>, rhs: Vec<f64>, tolerance: f64) -> Self {
        assert_eq!(lhs.len(), rhs.len());
        let scale = field_scale(&lhs, &rhs);
        let mut worst = f64::NEG_INFINITY;
        let mut worst_index = 0;
        let mut violations = 0;
        for (i, (l, r)) in lhs.iter().zip(&rhs).enumerate() {
            let d = l - r;
            let d = if d.is_nan() { f64::INFINITY } else { d };
            if d > worst {
                worst = d;
                worst_index = i;
            }
            if d > tolerance {
                violations += 1;
            }
        }
        InequalityReport {
            schema_version: REPORT_SCHEMA_VERSION,
            name: name.into(),
            lhs,
            rhs,
            worst_residual: worst,
            worst_index,
            violation_count: violations,
            tolerance,
            scale,
            grid: None,
            params: BTreeMap::new(),
        }
    }

    /// Tolerance `rel_tol * max(scale, floor)`.
    pub fn relative(name: impl Into<String>, lhs: Vec<f64>, rhs: Vec<f64>, rel_tol: f64, floor: f64) -> Self {
        let scale = field_scale(&lhs, &rhs).max(floor);
        Self::new(name, lhs, rhs, rel_tol * scale)
    }

    pub fn with_grid(mut self, traj: &Trajectory) -> Self {
        self.grid = Some(GridMeta::of(traj));
        self
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn passed(&self) -> bool {
        self.worst_residual <= self.tolerance
    }

    /// Largest positive excess over the tolerance-free inequality.
    pub fn violation(&self) -> f64 {
        self.worst_residual.max(0.0)
    }

    pub fn summary(&self) -> String {
        format!(
            "{:<32} {} worst={:+.3e} tol={:.3e} violations={}",
            self.name,
            if self.passed() { "PASS" } else { "FAIL" },
            self.worst_residual,
            self.tolerance,
            self.violation_count
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_worst() {
        let r = InequalityReport::new("x", vec![1.0, 2.0, 0.0], vec![1.5, 1.0, 0.0], 0.5);
        assert_eq!(r.worst_residual, 1.0);
        assert_eq!(r.worst_index, 1);
        assert_eq!(r.violation_count, 1);
        assert!(!r.passed());
    }

    #[test]
    fn nan_fails() {
        let r = InequalityReport::new("x", vec![f64::NAN], vec![0.0], 1.0);
        assert!(!r.passed());
    }

    #[test]
    fn json_roundtrip() {
        let r = InequalityReport::new("x", vec![0.0], vec![1.0], 0.0).with_param("k", 0.5);
        let s = serde_json::to_string(&r).unwrap();
        let back: InequalityReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back.params["k"], 0.5);
        assert_eq!(back.schema_version, REPORT_SCHEMA_VERSION);
    }
}
