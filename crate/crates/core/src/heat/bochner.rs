use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{gradient_threshold, DimensionParam, MeasureField};
use crate::heat::assembly::assemble_for_state;
use crate::linalg::{dot, Sym2};
use crate::metric::{DegenerateFallback, MetricField, NormDescriptor};

/// Node-wise Bochner residual on a flat weighted Riemannian torus.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BochnerReport {
    /// `Delta(F^2/2) - d(Delta u)(grad u) - Ric_inf(grad u) - |Hess u|^2`.
    pub residual: Vec<f64>,
    /// `Delta(F^2/2) - d(Delta u)(grad u) - Ric_N(grad u) - (Delta u)^2 / N`.
    pub slack: Option<Vec<f64>>,
    pub max_abs_residual: f64,
    pub min_slack: Option<f64>,
    /// Size of `Delta(F^2/2)`, for relative comparisons.
    pub scale: f64,
}

/// Evaluate the Bochner identity and its dimension-N inequality for `u`.
pub fn bochner_residual(
    metric: &MetricField,
    measure: &MeasureField,
    u: &[f64],
    n: DimensionParam,
) -> Result<BochnerReport> {
    let desc = metric
        .as_uniform()
        .ok_or_else(|| Error::UnsupportedFamily("position-dependent norm".into()))?;
    let a = match *desc {
        NormDescriptor::Euclidean { .. } => Sym2::IDENTITY,
        NormDescriptor::Riemannian { a, .. } => a,
        _ => return Err(Error::UnsupportedFamily(format!("{} norm", desc.family_name()))),
    };
    let grid = *metric.grid();
    let ainv = a.inverse().unwrap();
    let du = grid.differential(u);
    let thr = 10.0 * gradient_threshold(&grid, u);
    for (i, xi) in du.iter().enumerate() {
        let f = ainv.quad(*xi).sqrt();
        if f < thr {
            return Err(Error::DegenerateField { node: i, norm: f });
        }
    }
    let op = assemble_for_state(metric, measure, u, DegenerateFallback::default())?;
    let energy: Vec<f64> = du.iter().map(|xi| 0.5 * ainv.quad(*xi)).collect();
    let lap_energy = op.apply(&energy);
    let lap_u = op.apply(u);
    let d_lap = grid.differential(&lap_u);
    let f = measure.log_density();
    let df = grid.differential(f);
    let dim = grid.dim() as f64;
    let mut residual = Vec::with_capacity(grid.len());
    let mut slack = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        let v = ainv.apply(du[i]);
        let transport = dot(d_lap[i], v);
        let ric_inf = grid.hessian(f, i).quad(v);
        let hess = grid.hessian(u, i);
        let hs = ainv.trace_abab(&hess);
        residual.push(lap_energy[i] - transport - ric_inf - hs);
        if let DimensionParam::Finite(nv) = n {
            let dfv = dot(df[i], v);
            let ric_n = if nv > dim { ric_inf - dfv * dfv / (nv - dim) } else { ric_inf };
            slack.push(lap_energy[i] - transport - ric_n - lap_u[i] * lap_u[i] / nv);
        }
    }
    let max_abs_residual = residual.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    let scale = lap_energy.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    let (slack, min_slack) = match n {
        DimensionParam::Finite(_) => {
            let m = slack.iter().cloned().fold(f64::INFINITY, f64::min);
            (Some(slack), Some(m))
        }
        DimensionParam::Infinite => (None, None),
    };
    Ok(BochnerReport { residual, slack, max_abs_residual, min_slack, scale })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::TorusGrid;
    use std::f64::consts::TAU;

    #[test]
    fn rejects_randers_and_critical_points() {
        let g = TorusGrid::new(2, 16, 1.0).unwrap();
        let r = MetricField::uniform(g, NormDescriptor::randers(2, Sym2::IDENTITY, [0.2, 0.0]).unwrap()).unwrap();
        let mu = MeasureField::lebesgue(g);
        let u = g.sample(|x| (TAU * x[0] + 0.3).sin());
        assert!(matches!(
            bochner_residual(&r, &mu, &u, DimensionParam::Infinite),
            Err(Error::UnsupportedFamily(_))
        ));
        let e = MetricField::uniform(g, NormDescriptor::euclidean(2).unwrap()).unwrap();
        let c = g.sample(|x| (TAU * x[0]).cos());
        assert!(matches!(bochner_residual(&e, &mu, &c, DimensionParam::Infinite), Err(Error::DegenerateField { .. })));
    }

    #[test]
    fn residual_shrinks_with_refinement() {
        let mut errs = Vec::new();
        for n in [32, 64] {
            let g = TorusGrid::new(2, n, 1.0).unwrap();
            let m = MetricField::uniform(g, NormDescriptor::riemannian(2, Sym2::new(1.2, 0.2, 0.8)).unwrap()).unwrap();
            let mu = MeasureField::from_fn(g, |x| 0.2 * (TAU * x[0]).cos()).unwrap();
            let u = g.sample(|x| (TAU * x[0] + 0.3).sin() + 0.3 * (TAU * x[1] + 0.7).cos());
            let rep = bochner_residual(&m, &mu, &u, DimensionParam::Finite(4.0)).unwrap();
            errs.push(rep.max_abs_residual);
        }
        let order = (errs[0] / errs[1]).log2();
        assert!(order > 1.7, "{errs:?}");
    }
}
