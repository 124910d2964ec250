use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Sym2, Vec2};

/// Uniform periodic grid on `[0, period)^dim`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusGrid {
    dim: usize,
    nodes: usize,
    period: f64,
}

impl TorusGrid {
    pub fn new(dim: usize, nodes: usize, period: f64) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidGrid(format!("dimension {dim} not in {{1, 2}}")));
        }
        if nodes < 8 {
            return Err(Error::InvalidGrid(format!("need at least 8 nodes per axis, got {nodes}")));
        }
        if !(period > 0.0 && period.is_finite()) {
            return Err(Error::InvalidGrid(format!("period must be positive, got {period}")));
        }
        Ok(TorusGrid { dim, nodes, period })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Nodes per axis.
    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// Total number of nodes.
    pub fn len(&self) -> usize {
        self.nodes.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.period / self.nodes as f64
    }

    /// Lebesgue volume of one node cell.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    pub fn axis(&self, i: usize) -> (usize, usize) {
        (i % self.nodes, i / self.nodes)
    }

    pub fn index(&self, ix: usize, iy: usize) -> usize {
        ix + self.nodes * iy
    }

    pub fn coords(&self, i: usize) -> Vec2 {
        let (ix, iy) = self.axis(i);
        let h = self.spacing();
        [ix as f64 * h, iy as f64 * h]
    }

    /// Node reached from `i` by `(dx, dy)` grid steps, wrapping around.
    #[inline]
    pub fn shift(&self, i: usize, dx: isize, dy: isize) -> usize {
        let n = self.nodes as isize;
        let (ix, iy) = self.axis(i);
        let jx = (ix as isize + dx).rem_euclid(n) as usize;
        if self.dim == 1 {
            return jx;
        }
        let jy = (iy as isize + dy).rem_euclid(n) as usize;
        self.index(jx, jy)
    }

    /// Closest node to a point.
    pub fn nearest(&self, x: Vec2) -> usize {
        let h = self.spacing();
        let n = self.nodes as isize;
        let ix = ((x[0] / h).round() as isize).rem_euclid(n) as usize;
        if self.dim == 1 {
            return ix;
        }
        let iy = ((x[1] / h).round() as isize).rem_euclid(n) as usize;
        self.index(ix, iy)
    }

    pub fn sample<F: FnMut(Vec2) -> f64>(&self, mut f: F) -> Vec<f64> {
        (0..self.len()).map(|i| f(self.coords(i))).collect()
    }

    /// Centered-difference differential of `u` at every node.
    pub fn differential(&self, u: &[f64]) -> Vec<Vec2> {
        let inv = 0.5 / self.spacing();
        (0..self.len())
            .map(|i| {
                let dx = (u[self.shift(i, 1, 0)] - u[self.shift(i, -1, 0)]) * inv;
                let dy = if self.dim == 2 { (u[self.shift(i, 0, 1)] - u[self.shift(i, 0, -1)]) * inv } else { 0.0 };
                [dx, dy]
            })
            .collect()
    }

    /// Centered-difference Hessian of `u` at node `i`.
    pub fn hessian(&self, u: &[f64], i: usize) -> Sym2 {
        let h2 = self.spacing().powi(2);
        let c = u[i];
        let xx = (u[self.shift(i, 1, 0)] - 2.0 * c + u[self.shift(i, -1, 0)]) / h2;
        if self.dim == 1 {
            return Sym2::new(xx, 0.0, 0.0);
        }
        let yy = (u[self.shift(i, 0, 1)] - 2.0 * c + u[self.shift(i, 0, -1)]) / h2;
        let xy = (u[self.shift(i, 1, 1)] - u[self.shift(i, 1, -1)] - u[self.shift(i, -1, 1)] + u[self.shift(i, -1, -1)])
            / (4.0 * h2);
        Sym2::new(xx, xy, yy)
    }

    /// Periodic displacement `to - from` folded into `[-L/2, L/2)` per axis.
    pub fn displacement(&self, from: Vec2, to: Vec2) -> Vec2 {
        let l = self.period;
        let fold = |d: f64| d - l * (d / l).round();
        if self.dim == 1 {
            [fold(to[0] - from[0]), 0.0]
        } else {
            [fold(to[0] - from[0]), fold(to[1] - from[1])]
        }
    }
}
