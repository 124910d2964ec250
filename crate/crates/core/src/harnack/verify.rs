use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::finsler_distance;
use crate::harnack::bounds::{harnack_bound, HarnackMode};
use crate::heat::Trajectory;
use crate::semigroup::InequalityReport;

/// Exact heat kernel on a circle of length `period`, truncated to `modes` Fourier modes.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CircleHeatKernel {
    pub period: f64,
    pub modes: usize,
    pub source: f64,
}

impl CircleHeatKernel {
    pub fn new(period: f64, source: f64) -> Self {
        CircleHeatKernel { period, modes: 200, source }
    }

    /// `(1/L) (1 + 2 sum_k exp(-(2 pi k / L)^2 t) cos(2 pi k (x - x0) / L))`.
    pub fn value(&self, t: f64, x: f64) -> f64 {
        let w = TAU / self.period;
        let mut s = 0.0;
        for k in (1..=self.modes).rev() {
            let kf = k as f64;
            s += (-(w * kf).powi(2) * t).exp() * (w * kf * (x - self.source)).cos();
        }
        (1.0 + 2.0 * s) / self.period
    }

    /// Geodesic distance on the circle.
    pub fn distance(&self, x: f64, y: f64) -> f64 {
        let d = (x - y).rem_euclid(self.period);
        d.min(self.period - d)
    }
}

/// One space-time pair with its bound and slack `bound * rhs - lhs`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct HarnackSample {
    pub x1: f64,
    pub t1: f64,
    pub x2: f64,
    pub t2: f64,
    pub d: f64,
    pub bound: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
}

impl HarnackSample {
    pub const CSV_HEADER: &'static str = "x1,t1,x2,t2,d,bound,lhs,rhs,slack";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.x1, self.t1, self.x2, self.t2, self.d, self.bound, self.lhs, self.rhs, self.slack
        )
    }
}

/// Check `u(t1, x1) <= bound * u(t2, x2)` for the exact circle kernel at each pair.
pub fn verify_circle_kernel(
    kernel: &CircleHeatKernel,
    pairs: &[(f64, f64, f64, f64)],
    mode: &HarnackMode,
    n: f64,
) -> Result<Vec<HarnackSample>> {
    pairs
        .iter()
        .map(|&(x1, t1, x2, t2)| {
            let d = kernel.distance(x2, x1);
            let bound = harnack_bound(mode, n, 0.0, d, t1, t2)?;
            let lhs = kernel.value(t1, x1);
            let rhs = kernel.value(t2, x2);
            Ok(HarnackSample { x1, t1, x2, t2, d, bound, lhs, rhs, slack: bound * rhs - lhs })
        })
        .collect()
}

/// Check the Harnack inequality on a solved trajectory between nodes `x1`, `x2`
/// at time indices `k1 < k2`, with `d = d_F(x2, x1)` from the grid distance.
/// The tolerance is `rel_tol` times the larger side.
#[allow(clippy::too_many_arguments)]
pub fn verify_harnack(
    traj: &Trajectory,
    x1: usize,
    k1: usize,
    x2: usize,
    k2: usize,
    mode: &HarnackMode,
    n: f64,
    k: f64,
    rel_tol: f64,
) -> Result<(InequalityReport, HarnackSample)> {
    if !(k1 < k2) || k1 == 0 || k2 > traj.last_index() {
        return Err(Error::IndexRange(format!("Harnack pair needs 0 < k1 < k2 <= {}", traj.last_index())));
    }
    let (t1, t2) = (traj.time(k1), traj.time(k2));
    let d = finsler_distance(traj.metric(), x2, x1);
    let bound = harnack_bound(mode, n, k, d, t1, t2)?;
    let lhs = traj.state(k1)[x1];
    let rhs = traj.state(k2)[x2];
    let grid = traj.grid();
    let sample = HarnackSample {
        x1: grid.coords(x1)[0],
        t1,
        x2: grid.coords(x2)[0],
        t2,
        d,
        bound,
        lhs,
        rhs,
        slack: bound * rhs - lhs,
    };
    let report = InequalityReport::relative("harnack", vec![lhs], vec![bound * rhs], rel_tol, 0.0)
        .with_grid(traj)
        .with_param("d", d)
        .with_param("t1", t1)
        .with_param("t2", t2)
        .with_param("N", n)
        .with_param("K", k);
    Ok((report, sample))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_has_unit_mass_and_symmetry() {
        let k = CircleHeatKernel::new(2.0, 0.3);
        let m = crate::numerics::gauss_legendre(|x| k.value(0.01, x), 0.0, 2.0, 50);
        assert!((m - 1.0).abs() < 1e-12);
        assert!((k.value(0.05, 0.3 + 0.4) - k.value(0.05, 0.3 - 0.4)).abs() < 1e-13);
        assert!((k.distance(0.1, 1.9) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn circle_kernel_satisfies_flat_bound() {
        let k = CircleHeatKernel::new(1.0, 0.0);
        let pairs = [(0.0, 0.01, 0.0, 0.02), (0.1, 0.01, 0.3, 0.05), (0.45, 0.02, 0.0, 0.04)];
        for s in verify_circle_kernel(&k, &pairs, &HarnackMode::Lf, 1.0).unwrap() {
            assert!(s.slack >= -1e-8, "{s:?}");
        }
    }
}
