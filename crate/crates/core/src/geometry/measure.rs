use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::TorusGrid;
use crate::linalg::Vec2;
use crate::metric::NormDescriptor;

/// Weighted measure `dm = exp(-f) dx` sampled on a grid.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MeasureField {
    grid: TorusGrid,
    log_density: Vec<f64>,
    density: Vec<f64>,
    weights: Vec<f64>,
}

impl MeasureField {
    /// Measure with weight function values `f` (so `dm = exp(-f) dx`).
    pub fn from_log_density(grid: TorusGrid, f: Vec<f64>) -> Result<Self> {
        if f.len() != grid.len() {
            return Err(Error::InvalidGrid(format!("expected {} weight values, got {}", grid.len(), f.len())));
        }
        if f.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid("weight function must be finite".into()));
        }
        let cell = grid.cell_volume();
        let density: Vec<f64> = f.iter().map(|v| (-v).exp()).collect();
        let weights = density.iter().map(|d| d * cell).collect();
        Ok(MeasureField { grid, log_density: f, density, weights })
    }

    pub fn from_fn<F: FnMut(Vec2) -> f64>(grid: TorusGrid, f: F) -> Result<Self> {
        Self::from_log_density(grid, grid.sample(f))
    }

    pub fn lebesgue(grid: TorusGrid) -> Self {
        Self::from_log_density(grid, vec![0.0; grid.len()]).unwrap()
    }

    /// Lebesgue measure rescaled so that unit balls of `desc` have the
    /// Euclidean unit-ball volume.
    pub fn busemann_hausdorff(grid: TorusGrid, desc: &NormDescriptor) -> Self {
        let sigma = busemann_hausdorff_density(desc);
        Self::from_log_density(grid, vec![-sigma.ln(); grid.len()]).unwrap()
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    /// Weight function `f`.
    pub fn log_density(&self) -> &[f64] {
        &self.log_density
    }

    /// `exp(-f)` at nodes.
    pub fn density(&self) -> &[f64] {
        &self.density
    }

    /// Node weights `exp(-f_i) h^dim`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn is_constant(&self) -> bool {
        self.log_density.iter().all(|v| *v == self.log_density[0])
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn integrate(&self, field: &[f64]) -> f64 {
        field.iter().zip(&self.weights).map(|(a, w)| a * w).sum()
    }

    pub fn inner(&self, f: &[f64], g: &[f64]) -> f64 {
        f.iter().zip(g).zip(&self.weights).map(|((a, b), w)| a * b * w).sum()
    }

    /// `L^p(m)` norm; `p = f64::INFINITY` gives the sup norm.
    pub fn lp_norm(&self, f: &[f64], p: f64) -> f64 {
        if p.is_infinite() {
            return f.iter().fold(0.0, |m, v| m.max(v.abs()));
        }
        f.iter().zip(&self.weights).map(|(a, w)| a.abs().powf(p) * w).sum::<f64>().powf(1.0 / p)
    }
}

/// Constant density of the Busemann-Hausdorff measure of a constant norm.
pub fn busemann_hausdorff_density(desc: &NormDescriptor) -> f64 {
    let n = desc.dim() as i32;
    match *desc {
        NormDescriptor::Euclidean { .. } => 1.0,
        NormDescriptor::Riemannian { dim, a } => {
            if dim == 1 {
                a.xx.sqrt()
            } else {
                a.det().sqrt()
            }
        }
        NormDescriptor::Randers { dim, a, .. } => {
            let root = if dim == 1 { a.xx.sqrt() } else { a.det().sqrt() };
            let bb = desc.drift_norm().powi(2);
            root * (1.0 - bb).powf(0.5 * (n + 1) as f64)
        }
        NormDescriptor::Asym1D { plus, minus } => 2.0 / (1.0 / plus + 1.0 / minus),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Sym2;

    #[test]
    fn lebesgue_mass_is_volume() {
        let g = TorusGrid::new(2, 16, 2.0).unwrap();
        assert!((MeasureField::lebesgue(g).total_mass() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn randers_1d_ball_length() {
        // unit ball of |y| + b y is [-1/(1-b), 1/(1+b)]
        let b = 0.4;
        let d = NormDescriptor::randers(1, Sym2::scalar(1.0), [b, 0.0]).unwrap();
        let len = 1.0 / (1.0 - b) + 1.0 / (1.0 + b);
        assert!((busemann_hausdorff_density(&d) - 2.0 / len).abs() < 1e-14);
    }

    #[test]
    fn randers_2d_ball_area_by_quadrature() {
        let d = NormDescriptor::randers(2, Sym2::new(1.3, 0.2, 0.9), [0.3, -0.2]).unwrap();
        // area = 1/2 * integral over angles of r(th)^2, r = 1 / F(dir)
        let n = 20000;
        let area: f64 = (0..n)
            .map(|k| {
                let th = std::f64::consts::TAU * (k as f64 + 0.5) / n as f64;
                0.5 / d.norm([th.cos(), th.sin()]).powi(2)
            })
            .sum::<f64>()
            * std::f64::consts::TAU
            / n as f64;
        let sigma = std::f64::consts::PI / area;
        assert!((busemann_hausdorff_density(&d) - sigma).abs() < 1e-10);
    }

    #[test]
    fn lp_norms() {
        let g = TorusGrid::new(1, 8, 1.0).unwrap();
        let m = MeasureField::lebesgue(g);
        let f = vec![1.0, -1.0, 1.0, -1.0, 1.0, -1.0, 1.0, -1.0];
        assert!((m.lp_norm(&f, 1.0) - 1.0).abs() < 1e-15);
        assert!((m.lp_norm(&f, 2.0) - 1.0).abs() < 1e-15);
        assert_eq!(m.lp_norm(&f, f64::INFINITY), 1.0);
    }
}
