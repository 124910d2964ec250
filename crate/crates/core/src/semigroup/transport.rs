use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heat::Trajectory;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// `P_{s,t}`: replay the recorded steps `s -> t`.
    Forward,
    /// `P^_{t,s}`: the same steps in reverse order.
    Adjoint,
}

/// Time-index pair `s <= t` on a trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransportPlan {
    pub s: usize,
    pub t: usize,
    pub direction: Direction,
}

impl TransportPlan {
    pub fn forward(s: usize, t: usize) -> Self {
        TransportPlan { s, t, direction: Direction::Forward }
    }

    pub fn adjoint(s: usize, t: usize) -> Self {
        TransportPlan { s, t, direction: Direction::Adjoint }
    }

    pub fn validate(&self, traj: &Trajectory) -> Result<()> {
        if self.s > self.t {
            return Err(Error::IndexRange(format!("s = {} after t = {}", self.s, self.t)));
        }
        if self.t > traj.last_index() {
            return Err(Error::IndexRange(format!("t = {} beyond the last level {}", self.t, traj.last_index())));
        }
        Ok(())
    }

    /// Elapsed time `t - s`.
    pub fn span(&self, traj: &Trajectory) -> f64 {
        traj.time(self.t) - traj.time(self.s)
    }
}

/// Apply the linearised semigroup described by `plan` to `g`.
pub fn transport(traj: &Trajectory, plan: TransportPlan, g: &[f64]) -> Result<Vec<f64>> {
    plan.validate(traj)?;
    if g.len() != traj.grid().len() {
        return Err(Error::InvalidGrid("field has the wrong length".into()));
    }
    let mut x = g.to_vec();
    match plan.direction {
        Direction::Forward => {
            for k in plan.s..plan.t {
                x = traj.apply_step(k, &x)?;
            }
        }
        Direction::Adjoint => {
            for k in (plan.s..plan.t).rev() {
                x = traj.apply_step(k, &x)?;
            }
        }
    }
    Ok(x)
}

/// `P^_{t,sigma} phi` for every `sigma` in `0..=t`, indexed by `sigma`.
pub fn adjoint_sweep(traj: &Trajectory, t: usize, phi: &[f64]) -> Result<Vec<Vec<f64>>> {
    TransportPlan::adjoint(0, t).validate(traj)?;
    let mut out = vec![Vec::new(); t + 1];
    out[t] = phi.to_vec();
    for k in (0..t).rev() {
        out[k] = traj.apply_step(k, &out[k + 1])?;
    }
    Ok(out)
}

/// `sum_k w_k P_{k,t}(q_k)` over `k = s..=t` in a single forward pass.
pub fn weighted_forward_sum(traj: &Trajectory, s: usize, t: usize, weights: &[f64], q: &[Vec<f64>]) -> Result<Vec<f64>> {
    TransportPlan::forward(s, t).validate(traj)?;
    let mut acc: Vec<f64> = q[0].iter().map(|v| weights[0] * v).collect();
    for (j, k) in (s..t).enumerate() {
        acc = traj.apply_step(k, &acc)?;
        for (a, v) in acc.iter_mut().zip(&q[j + 1]) {
            *a += weights[j + 1] * v;
        }
    }
    Ok(acc)
}
