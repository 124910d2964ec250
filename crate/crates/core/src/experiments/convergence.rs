use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::config::{ExperimentConfig, MeasureConfig, Setup};
use crate::experiments::run::{evaluate_checks, solve};
use crate::heat::Trajectory;
use crate::metric::NormDescriptor;
use crate::numerics::fit_order;

/// Pass criterion attached to a row.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ExpectedOrder {
    /// Fitted order in `h` within `[lo, hi]`.
    InH { lo: f64, hi: f64 },
    /// Fitted order in `dt` within `[lo, hi]`.
    InDt { lo: f64, hi: f64 },
    /// Values strictly decreasing along the ladder.
    Decreasing,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConvergenceRow {
    /// `<check>/<report>#<occurrence>`, or `heat-linf-error`.
    pub quantity: String,
    pub values: Vec<f64>,
    pub order_h: f64,
    pub order_dt: f64,
    pub decreasing: bool,
    pub expected: Option<ExpectedOrder>,
    pub passed: Option<bool>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub name: String,
    pub h: Vec<f64>,
    pub dt: Vec<f64>,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    pub fn row(&self, quantity: &str) -> Option<&ConvergenceRow> {
        self.rows.iter().find(|r| r.quantity == quantity)
    }

    /// Rows with an expectation that is not met.
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.passed == Some(false)).count()
    }

    /// One line per quantity: `quantity,order_h,order_dt,decreasing,passed,v_0,v_1,...`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("quantity,order_h,order_dt,decreasing,passed");
        for (h, dt) in self.h.iter().zip(&self.dt) {
            let _ = write!(s, ",h={h}|dt={dt}");
        }
        s.push('\n');
        for r in &self.rows {
            let passed = r.passed.map_or("".to_string(), |p| p.to_string());
            let _ = write!(s, "{},{},{},{},{}", r.quantity, r.order_h, r.order_dt, r.decreasing, passed);
            for v in &r.values {
                let _ = write!(s, ",{v}");
            }
            s.push('\n');
        }
        s
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("convergence.csv"), self.to_csv())?;
        std::fs::write(dir.join("convergence.json"), serde_json::to_string_pretty(self)?)?;
        Ok(())
    }
}

/// Sup-norm error against the Fourier solution when the flow is linear with
/// constant coefficients: a quadratic norm, a constant density and a cosine datum.
fn exact_error(config: &ExperimentConfig, setup: &Setup, traj: &Trajectory) -> Option<f64> {
    let a = match config.metric {
        NormDescriptor::Euclidean { .. } | NormDescriptor::Riemannian { .. } => config.metric.riemannian_part(),
        _ => return None,
    };
    let constant_density = match &config.measure {
        MeasureConfig::Lebesgue | MeasureConfig::BusemannHausdorff => true,
        MeasureConfig::Weight { f } => f.terms.is_empty() && f.table.is_none(),
    };
    if !constant_density || config.initial.table.is_some() {
        return None;
    }
    let ainv = a.inverse()?;
    let k = traj.last_index();
    let t = traj.time(k);
    let p = setup.grid.period();
    let w = std::f64::consts::TAU / p;
    let exact = setup.grid.sample(|x| {
        config.initial.constant
            + config
                .initial
                .terms
                .iter()
                .map(|c| {
                    let kv = [c.kx as f64, c.ky as f64];
                    c.eval(x, p) * (-w * w * ainv.quad(kv) * t).exp()
                })
                .sum::<f64>()
    });
    Some(exact.iter().zip(traj.state(k)).fold(0.0f64, |m, (a, b)| m.max((a - b).abs())))
}

fn expectation(quantity: &str) -> Option<ExpectedOrder> {
    if quantity == "heat-linf-error" {
        Some(ExpectedOrder::InH { lo: 1.7, hi: 2.3 })
    } else if quantity.starts_with("variance/") {
        Some(ExpectedOrder::InDt { lo: 0.7, hi: 1.3 })
    } else if quantity.starts_with("li-yau/") || quantity.starts_with("li-yau-psi/li-yau") {
        Some(ExpectedOrder::Decreasing)
    } else {
        None
    }
}

/// Solve and check every ladder level and tabulate each report's worst residual.
pub fn convergence_table(config: &ExperimentConfig) -> Result<ConvergenceTable> {
    if config.ladder.len() < 2 {
        return Err(Error::Config("a convergence table needs at least two ladder levels".into()));
    }
    let mut h = Vec::new();
    let mut dt = Vec::new();
    let mut order: Vec<String> = Vec::new();
    let mut values: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for (level_no, level) in config.ladder.iter().enumerate() {
        let cfg = config.at_level(*level);
        let (setup, traj, _) = solve(&cfg)?;
        h.push(setup.grid.spacing());
        dt.push(traj.dt());
        let mut seen: BTreeMap<String, usize> = BTreeMap::new();
        let mut level_rows: Vec<(String, f64)> = Vec::new();
        if let Some(e) = exact_error(&cfg, &setup, &traj) {
            level_rows.push(("heat-linf-error".into(), e));
        }
        for o in evaluate_checks(&cfg, &setup, &traj, None)? {
            let base = format!("{}/{}", o.check, o.report.name);
            let n = seen.entry(base.clone()).or_insert(0);
            level_rows.push((format!("{base}#{n}"), o.report.worst_residual));
            *n += 1;
        }
        for (q, v) in level_rows {
            let entry = values.entry(q.clone()).or_default();
            if entry.len() != level_no {
                return Err(Error::Config(format!("quantity '{q}' is not produced at every ladder level")));
            }
            if level_no == 0 {
                order.push(q);
            }
            entry.push(v);
        }
    }
    let rows = order
        .into_iter()
        .map(|q| {
            let v = values.remove(&q).unwrap_or_default();
            let decreasing = v.len() == h.len() && v.windows(2).all(|p| p[1] < p[0]);
            let order_h = fit_order(&h, &v);
            let order_dt = fit_order(&dt, &v);
            let expected = expectation(&q);
            let passed = expected.map(|e| {
                v.len() == h.len()
                    && match e {
                        ExpectedOrder::InH { lo, hi } => order_h >= lo && order_h <= hi,
                        ExpectedOrder::InDt { lo, hi } => order_dt >= lo && order_dt <= hi,
                        ExpectedOrder::Decreasing => decreasing,
                    }
            });
            ConvergenceRow { quantity: q, values: v, order_h, order_dt, decreasing, expected, passed }
        })
        .collect();
    Ok(ConvergenceTable { name: config.name.clone(), h, dt, rows })
}
