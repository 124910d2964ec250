use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{gradient_field, MeasureField, TorusGrid, VectorField};
use crate::linalg::Sym2;
use crate::metric::{DegenerateFallback, MetricField};

/// Stored neighbour offsets: each symmetric pair is kept once.
const OFFSETS_1D: [(isize, isize); 1] = [(1, 0)];
const OFFSETS_2D: [(isize, isize); 4] = [(1, 0), (0, 1), (1, 1), (-1, 1)];
const E: usize = 0;
const N: usize = 1;
const NE: usize = 2;
const NW: usize = 3;

/// Linearised weighted Laplacian `Delta^V` as a symmetric finite-volume
/// stencil: `(A u)_i = inv_w_i * sum_j c_ij (u_j - u_i)` with `c_ij = c_ji`.
///
/// In 2D each grid cell splits its averaged tensor into axis and diagonal
/// couplings. When the cell tensor is diagonally dominant the split has
/// non-negative weights (monotone); otherwise the cell falls back to the
/// cell-centred box form, which stays symmetric and semi-definite.
#[derive(Clone, Debug)]
pub struct DiffusionAssembly {
    grid: TorusGrid,
    weights: Arc<Vec<f64>>,
    inv_w: Arc<Vec<f64>>,
    couplings: Vec<f64>,
    row_sum: Vec<f64>,
    max_diffusivity: f64,
    nonmonotone_cells: usize,
    degenerate_nodes: usize,
}

fn offsets(dim: usize) -> &'static [(isize, isize)] {
    if dim == 1 {
        &OFFSETS_1D
    } else {
        &OFFSETS_2D
    }
}

/// Assemble `Delta^V` for the vector field `v`.
pub fn weighted_laplacian(
    metric: &MetricField,
    measure: &MeasureField,
    v: &VectorField,
    fallback: DegenerateFallback,
) -> DiffusionAssembly {
    let grid = *metric.grid();
    let mut tensors = Vec::with_capacity(grid.len());
    let mut degenerate = 0;
    for (i, vi) in v.iter().enumerate() {
        let (t, used) = metric.at(i).diffusion_tensor(*vi, fallback);
        if used {
            degenerate += 1;
        }
        tensors.push(t);
    }
    assemble(grid, measure, &tensors, degenerate)
}

/// Assemble the operator for `V = grad u`.
pub fn assemble_for_state(
    metric: &MetricField,
    measure: &MeasureField,
    u: &[f64],
    fallback: DegenerateFallback,
) -> Result<DiffusionAssembly> {
    let (v, _) = gradient_field(metric, u)?;
    Ok(weighted_laplacian(metric, measure, &v, fallback))
}

/// `Delta u = Delta^{grad u} u`.
pub fn nonlinear_laplacian(metric: &MetricField, measure: &MeasureField, u: &[f64]) -> Result<Vec<f64>> {
    Ok(assemble_for_state(metric, measure, u, DegenerateFallback::default())?.apply(u))
}

/// Assemble from node-wise inverse tensors `g^{ij}`.
pub fn assemble(grid: TorusGrid, measure: &MeasureField, tensors: &[Sym2], degenerate_nodes: usize) -> DiffusionAssembly {
    let rho = measure.density();
    let h2 = grid.spacing().powi(2);
    let inv_w: Vec<f64> = rho.iter().map(|r| 1.0 / (r * h2)).collect();
    let stride = offsets(grid.dim()).len();
    let mut c = vec![0.0; grid.len() * stride];
    let mut nonmonotone = 0;
    let max_diffusivity = tensors.iter().map(|t| t.eigenvalues().1).fold(0.0, f64::max);
    if grid.dim() == 1 {
        for i in 0..grid.len() {
            let j = grid.shift(i, 1, 0);
            c[i] = 0.25 * (rho[i] + rho[j]) * (tensors[i].xx + tensors[j].xx);
        }
    } else {
        for i in 0..grid.len() {
            let e = grid.shift(i, 1, 0);
            let n = grid.shift(i, 0, 1);
            let ne = grid.shift(i, 1, 1);
            let d = Sym2::new(
                0.25 * (tensors[i].xx + tensors[e].xx + tensors[n].xx + tensors[ne].xx),
                0.25 * (tensors[i].xy + tensors[e].xy + tensors[n].xy + tensors[ne].xy),
                0.25 * (tensors[i].yy + tensors[e].yy + tensors[n].yy + tensors[ne].yy),
            );
            let r = 0.25 * (rho[i] + rho[e] + rho[n] + rho[ne]);
            let axy = d.xy.abs();
            let (wx, wy) = if axy <= d.xx.min(d.yy) {
                if d.xy >= 0.0 {
                    c[i * stride + NE] += r * axy;
                } else {
                    c[e * stride + NW] += r * axy;
                }
                (d.xx - axy, d.yy - axy)
            } else {
                nonmonotone += 1;
                c[i * stride + NE] += 0.5 * r * d.xy;
                c[e * stride + NW] -= 0.5 * r * d.xy;
                (d.xx, d.yy)
            };
            c[i * stride + E] += 0.5 * r * wx;
            c[n * stride + E] += 0.5 * r * wx;
            c[i * stride + N] += 0.5 * r * wy;
            c[e * stride + N] += 0.5 * r * wy;
        }
    }
    let mut row_sum = vec![0.0; grid.len()];
    for i in 0..grid.len() {
        for (o, &(dx, dy)) in offsets(grid.dim()).iter().enumerate() {
            let j = grid.shift(i, dx, dy);
            row_sum[i] += c[i * stride + o];
            row_sum[j] += c[i * stride + o];
        }
    }
    DiffusionAssembly {
        grid,
        weights: Arc::new(measure.weights().to_vec()),
        inv_w: Arc::new(inv_w),
        couplings: c,
        row_sum,
        max_diffusivity,
        nonmonotone_cells: nonmonotone,
        degenerate_nodes,
    }
}

/// Outcome of one linear solve.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CgStats {
    pub iterations: usize,
    pub relative_residual: f64,
}

impl DiffusionAssembly {
    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    /// Measure weights used for the inner product.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Cells that used the non-monotone box form.
    pub fn nonmonotone_cells(&self) -> usize {
        self.nonmonotone_cells
    }

    /// Nodes where the fallback tensor was used.
    pub fn degenerate_nodes(&self) -> usize {
        self.degenerate_nodes
    }

    /// Largest eigenvalue of `g^{ij}` over nodes.
    pub fn max_diffusivity(&self) -> f64 {
        self.max_diffusivity
    }

    /// Largest diagonal entry of `-A`.
    pub fn max_rate(&self) -> f64 {
        self.row_sum.iter().zip(self.inv_w.iter()).map(|(s, w)| s * w).fold(0.0, f64::max)
    }

    /// `A u`.
    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; u.len()];
        self.apply_into(u, &mut out);
        out
    }

    pub fn apply_into(&self, u: &[f64], out: &mut [f64]) {
        let g = &self.grid;
        if g.dim() == 2 {
            self.apply_into_2d(u, out);
            return;
        }
        let offs = offsets(g.dim());
        let stride = offs.len();
        for i in 0..g.len() {
            let ui = u[i];
            let mut acc = 0.0;
            for (o, &(dx, dy)) in offs.iter().enumerate() {
                let j = g.shift(i, dx, dy);
                let k = g.shift(i, -dx, -dy);
                acc += self.couplings[i * stride + o] * (u[j] - ui) + self.couplings[k * stride + o] * (u[k] - ui);
            }
            out[i] = acc * self.inv_w[i];
        }
    }

    /// Row-by-row form of `apply_into` with the wraparound resolved per row.
    fn apply_into_2d(&self, u: &[f64], out: &mut [f64]) {
        let n = self.grid.nodes();
        let c = &self.couplings;
        let wrap = |a: usize, up: bool| match (up, a) {
            (true, a) if a + 1 == n => 0,
            (true, a) => a + 1,
            (false, 0) => n - 1,
            (false, a) => a - 1,
        };
        for iy in 0..n {
            let (yn, ys) = (wrap(iy, true), wrap(iy, false));
            for ix in 0..n {
                let (xe, xw) = (wrap(ix, true), wrap(ix, false));
                let i = ix + n * iy;
                let ui = u[i];
                let pairs = [
                    (E, xe + n * iy, xw + n * iy),
                    (N, ix + n * yn, ix + n * ys),
                    (NE, xe + n * yn, xw + n * ys),
                    (NW, xw + n * yn, xe + n * ys),
                ];
                let mut acc = 0.0;
                for (o, j, k) in pairs {
                    acc += c[i * 4 + o] * (u[j] - ui) + c[k * 4 + o] * (u[k] - ui);
                }
                out[i] = acc * self.inv_w[i];
            }
        }
    }

    /// `sum_{pairs} c_ij (u_j - u_i)(v_j - v_i)`, equal to `-<A u, v>_m`.
    pub fn dirichlet_form(&self, u: &[f64], v: &[f64]) -> f64 {
        let g = &self.grid;
        let offs = offsets(g.dim());
        let stride = offs.len();
        let mut s = 0.0;
        for i in 0..g.len() {
            for (o, &(dx, dy)) in offs.iter().enumerate() {
                let j = g.shift(i, dx, dy);
                s += self.couplings[i * stride + o] * (u[j] - u[i]) * (v[j] - v[i]);
            }
        }
        s
    }

    fn inner(&self, a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).zip(self.weights.iter()).map(|((x, y), w)| x * y * w).sum()
    }

    /// Solve `(I - theta A) x = b` by Jacobi-preconditioned conjugate
    /// gradients in the measure inner product, starting from `x = b`.
    pub fn solve_shifted(&self, theta: f64, b: &[f64], rel_tol: f64) -> Result<(Vec<f64>, CgStats)> {
        let n = b.len();
        let bnorm = self.inner(b, b).sqrt();
        let mut x = b.to_vec();
        if bnorm == 0.0 {
            return Ok((x, CgStats::default()));
        }
        let diag: Vec<f64> = self.row_sum.iter().zip(self.inv_w.iter()).map(|(s, w)| 1.0 + theta * s * w).collect();
        let mut ax = vec![0.0; n];
        self.apply_into(&x, &mut ax);
        let mut r: Vec<f64> = (0..n).map(|i| b[i] - (x[i] - theta * ax[i])).collect();
        let mut rnorm = self.inner(&r, &r).sqrt();
        if rnorm <= rel_tol * bnorm {
            return Ok((x, CgStats { iterations: 0, relative_residual: rnorm / bnorm }));
        }
        let mut z: Vec<f64> = (0..n).map(|i| r[i] / diag[i]).collect();
        let mut p = z.clone();
        let mut rz = self.inner(&r, &z);
        let max_iter = 10 * n;
        let mut q = vec![0.0; n];
        for it in 1..=max_iter {
            self.apply_into(&p, &mut ax);
            for i in 0..n {
                q[i] = p[i] - theta * ax[i];
            }
            let alpha = rz / self.inner(&p, &q);
            for i in 0..n {
                x[i] += alpha * p[i];
                r[i] -= alpha * q[i];
            }
            rnorm = self.inner(&r, &r).sqrt();
            if rnorm <= rel_tol * bnorm {
                return Ok((x, CgStats { iterations: it, relative_residual: rnorm / bnorm }));
            }
            for i in 0..n {
                z[i] = r[i] / diag[i];
            }
            let rz_new = self.inner(&r, &z);
            let beta = rz_new / rz;
            rz = rz_new;
            for i in 0..n {
                p[i] = z[i] + beta * p[i];
            }
        }
        Err(Error::SolverDivergence { iterations: max_iter, residual: rnorm / bnorm })
    }
}
