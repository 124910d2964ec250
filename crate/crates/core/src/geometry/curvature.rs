use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::MeasureField;
use crate::linalg::Sym2;
use crate::metric::{MetricField, NormDescriptor};

/// Effective dimension parameter `N`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DimensionParam {
    Finite(f64),
    Infinite,
}

impl DimensionParam {
    pub fn value(&self) -> f64 {
        match self {
            DimensionParam::Finite(n) => *n,
            DimensionParam::Infinite => f64::INFINITY,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Exact for the family (flat norm with constant density).
    Analytic,
    /// Node-wise minimum of discrete derivatives of the weight.
    Discrete,
    /// Supplied by the user.
    Manual,
}

/// Lower bound `Ric_N >= K`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureBound {
    pub n: DimensionParam,
    pub k: f64,
    pub provenance: Provenance,
}

impl CurvatureBound {
    pub fn manual(n: DimensionParam, k: f64) -> Self {
        CurvatureBound { n, k, provenance: Provenance::Manual }
    }
}

/// Smallest root of `det(q - lambda a) = 0`, i.e. the minimum of `q(v, v)`
/// over `a(v, v) = 1`.
fn min_generalized_eigenvalue(q: Sym2, a: Sym2) -> f64 {
    let c2 = a.det();
    let c1 = -(q.xx * a.yy + q.yy * a.xx - 2.0 * q.xy * a.xy);
    let c0 = q.det();
    let disc = (c1 * c1 - 4.0 * c2 * c0).max(0.0).sqrt();
    let r1 = (-c1 - disc) / (2.0 * c2);
    let r2 = (-c1 + disc) / (2.0 * c2);
    r1.min(r2)
}

/// Lower bound of the weighted Ricci curvature.
///
/// Supported: flat Euclidean/Riemannian norms with any smooth weight, and
/// constant Randers norms with constant density.
pub fn ricci_lower_bound(metric: &MetricField, measure: &MeasureField, n: DimensionParam) -> Result<CurvatureBound> {
    let desc = metric
        .as_uniform()
        .ok_or_else(|| Error::UnsupportedFamily("position-dependent norm".into()))?;
    let grid = *metric.grid();
    let dim = grid.dim() as f64;
    if let DimensionParam::Finite(nv) = n {
        if nv < dim {
            return Err(Error::UnsupportedFamily(format!("N = {nv} below the dimension")));
        }
    }
    let a = match *desc {
        NormDescriptor::Euclidean { .. } => Sym2::IDENTITY,
        NormDescriptor::Riemannian { a, .. } => a,
        NormDescriptor::Randers { .. } if measure.is_constant() => {
            return Ok(CurvatureBound { n, k: 0.0, provenance: Provenance::Analytic })
        }
        _ => {
            return Err(Error::UnsupportedFamily(format!(
                "{} norm with a non-constant weight",
                desc.family_name()
            )))
        }
    };
    if measure.is_constant() {
        return Ok(CurvatureBound { n, k: 0.0, provenance: Provenance::Analytic });
    }
    let f = measure.log_density();
    let df = grid.differential(f);
    let mut k = f64::INFINITY;
    for i in 0..grid.len() {
        let hess = grid.hessian(f, i);
        let q = match n {
            DimensionParam::Infinite => hess,
            DimensionParam::Finite(nv) => {
                if nv == dim {
                    if df[i][0] != 0.0 || df[i][1] != 0.0 {
                        return Ok(CurvatureBound { n, k: f64::NEG_INFINITY, provenance: Provenance::Discrete });
                    }
                    hess
                } else {
                    hess.sub(Sym2::outer(df[i]).scaled(1.0 / (nv - dim)))
                }
            }
        };
        let v = if grid.dim() == 1 { q.xx / a.xx } else { min_generalized_eigenvalue(q, a) };
        k = k.min(v);
    }
    Ok(CurvatureBound { n, k, provenance: Provenance::Discrete })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::TorusGrid;

    #[test]
    fn generalized_eigenvalue_matches_sampling() {
        let q = Sym2::new(0.3, -1.1, 2.0);
        let a = Sym2::new(1.5, 0.4, 0.7);
        let mut best = f64::INFINITY;
        for k in 0..100_000 {
            let th = std::f64::consts::TAU * k as f64 / 100_000.0;
            let d = [th.cos(), th.sin()];
            best = best.min(q.quad(d) / a.quad(d));
        }
        assert!((min_generalized_eigenvalue(q, a) - best).abs() < 1e-8);
    }

    #[test]
    fn cosine_weight_infinite_n() {
        let l = 1.0;
        let eps = 0.2;
        let g = TorusGrid::new(1, 128, l).unwrap();
        let k = std::f64::consts::TAU / l;
        let m = MeasureField::from_fn(g, |x| eps * (k * x[0]).cos()).unwrap();
        let metric = MetricField::uniform(g, NormDescriptor::euclidean(1).unwrap()).unwrap();
        let b = ricci_lower_bound(&metric, &m, DimensionParam::Infinite).unwrap();
        // discrete oracle: second difference at x = 0
        let h = g.spacing();
        let oracle = eps * (2.0 * (k * h).cos() - 2.0) / (h * h);
        assert!((b.k - oracle).abs() < 1e-9, "{} vs {}", b.k, oracle);
        assert!((b.k + eps * k * k).abs() < 1e-3 * eps * k * k);
        assert_eq!(b.provenance, Provenance::Discrete);
    }

    #[test]
    fn randers_constant_density_is_flat() {
        let g = TorusGrid::new(2, 16, 1.0).unwrap();
        let d = NormDescriptor::randers(2, Sym2::IDENTITY, [0.3, 0.0]).unwrap();
        let metric = MetricField::uniform(g, d).unwrap();
        let m = MeasureField::busemann_hausdorff(g, &d);
        let b = ricci_lower_bound(&metric, &m, DimensionParam::Finite(2.0)).unwrap();
        assert_eq!(b.k, 0.0);
        let weighted = MeasureField::from_fn(g, |x| x[0].sin()).unwrap();
        assert!(matches!(
            ricci_lower_bound(&metric, &weighted, DimensionParam::Infinite),
            Err(Error::UnsupportedFamily(_))
        ));
    }

    #[test]
    fn finite_n_equal_to_dimension_with_weight_is_minus_infinity() {
        let g = TorusGrid::new(1, 16, 1.0).unwrap();
        let m = MeasureField::from_fn(g, |x| 0.1 * (std::f64::consts::TAU * x[0]).sin()).unwrap();
        let metric = MetricField::uniform(g, NormDescriptor::euclidean(1).unwrap()).unwrap();
        let b = ricci_lower_bound(&metric, &m, DimensionParam::Finite(1.0)).unwrap();
        assert_eq!(b.k, f64::NEG_INFINITY);
    }
}
