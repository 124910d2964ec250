use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::experiments::config::{ExperimentConfig, Setup};
use crate::geometry::{CurvatureBound, TorusGrid};
use crate::harnack::verify_harnack;
use crate::heat::{solve_heat_flow, Trajectory};
use crate::liyau::{check_exp_uu, check_log_sob_weak, entropy_profile, residual_linear, residual_psi};
use crate::semigroup::{
    check_conservation, disc_tolerance, gradient_estimate_check, lipschitz_decay, local_logsob_check,
    structural_suite, variance_identity, InequalityReport, TransportPlan, K_ZERO, STRUCTURAL_TOL,
};

pub const MANIFEST_SCHEMA_VERSION: u32 = 1;

/// Bound on the exact structural identities (constants, duality, semigroup law).
const IDENTITY_TOL: f64 = 1e-12;

/// One report tagged with the check that produced it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub check: String,
    pub report: InequalityReport,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportEntry {
    pub check: String,
    pub name: String,
    pub path: String,
    pub passed: bool,
    pub worst_residual: f64,
    pub tolerance: f64,
    pub violation_count: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub name: String,
    /// SHA-256 of the normalised TOML configuration.
    pub config_hash: String,
    pub tool_version: String,
    pub seed: u64,
    pub curvature: CurvatureBound,
    pub fields_csv: String,
    pub reports: Vec<ReportEntry>,
    pub failed: usize,
    pub solve_seconds: f64,
    pub check_seconds: f64,
}

impl RunManifest {
    pub fn exit_code(&self) -> i32 {
        if self.failed == 0 {
            0
        } else {
            1
        }
    }
}

fn config_hash(config: &ExperimentConfig) -> String {
    hex::encode(Sha256::digest(config.to_toml_string().as_bytes()))
}

/// `count` random trigonometric fields with values in roughly `[-1, 1]`.
pub fn random_fields(grid: &TorusGrid, seed: u64, count: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = grid.period();
    let two_d = grid.dim() == 2;
    (0..count)
        .map(|_| {
            let modes: Vec<(f64, f64, f64, f64)> = (0..4)
                .map(|_| {
                    let kx = rng.gen_range(-3..=3) as f64;
                    let ky = if two_d { rng.gen_range(-3..=3) as f64 } else { 0.0 };
                    (rng.gen_range(-0.5..0.5), kx, ky, rng.gen_range(0.0..std::f64::consts::TAU))
                })
                .collect();
            grid.sample(|x| {
                modes
                    .iter()
                    .map(|(a, kx, ky, ph)| a * (std::f64::consts::TAU * (kx * x[0] + ky * x[1]) / p + ph).cos())
                    .sum()
            })
        })
        .collect()
}

/// Time indices `0 = k_0 < k_1 < ...` of the snapshot list.
fn snapshot_indices(config: &ExperimentConfig, traj: &Trajectory) -> Vec<usize> {
    let mut idx: Vec<usize> = if config.time.snapshots.is_empty() {
        vec![traj.last_index()]
    } else {
        config.time.snapshots.iter().map(|t| traj.index_at(*t)).collect()
    };
    idx.retain(|k| *k > 0);
    idx.sort_unstable();
    idx.dedup();
    idx
}

fn consecutive_pairs(snaps: &[usize]) -> Vec<(usize, usize)> {
    let mut prev = 0;
    snaps
        .iter()
        .map(|&k| {
            let p = (prev, k);
            prev = k;
            p
        })
        .collect()
}

fn finite_n(check: &str, n: f64) -> Result<f64> {
    if n.is_finite() {
        Ok(n)
    } else {
        Err(Error::Config(format!("check '{check}' needs a finite dimension parameter")))
    }
}

fn scalar(name: &str, value: f64, tol: f64, traj: &Trajectory) -> InequalityReport {
    InequalityReport::new(name, vec![value], vec![0.0], tol).with_grid(traj)
}

/// Structural suite on `[0, last snapshot]` through the first snapshot, for
/// `random_fields` seeded pairs of fields.
fn semigroup_suite(config: &ExperimentConfig, traj: &Trajectory, snaps: &[usize]) -> Result<Vec<InequalityReport>> {
    let fields = random_fields(traj.grid(), config.seed, 2 * config.checks.random_fields.max(1));
    let t = *snaps.last().unwrap_or(&traj.last_index());
    let r = if snaps.len() > 1 { snaps[0] } else { t / 2 };
    let mut out = Vec::new();
    for pair in fields.chunks(2) {
        out.extend(structural_suite(traj, 0, r, t, &pair[0], &pair[1], IDENTITY_TOL)?);
    }
    Ok(out)
}

/// Tolerance for gaps of first order in `dt`: `2 dt / span + 10 h^2`.
fn first_order_tol(traj: &Trajectory, span: f64) -> f64 {
    let h = traj.grid().spacing();
    2.0 * traj.dt() / span + 10.0 * h * h
}

fn test_field(config: &ExperimentConfig, grid: &TorusGrid) -> Result<Vec<f64>> {
    match &config.checks.test_field {
        Some(f) => f.sample(grid),
        None => Ok(vec![1.0; grid.len()]),
    }
}

fn one_check(name: &str, config: &ExperimentConfig, setup: &Setup, traj: &Trajectory) -> Result<Vec<InequalityReport>> {
    let snaps = snapshot_indices(config, traj);
    let pairs = consecutive_pairs(&snaps);
    let k = setup.curvature.k;
    let n = setup.curvature.n.value();
    let mut out = Vec::new();
    match name {
        "conservation" => out.push(check_conservation(traj, STRUCTURAL_TOL)),
        "semigroup" => out = semigroup_suite(config, traj, &snaps)?,
        "variance" => {
            for &(s, t) in &pairs {
                let plan = TransportPlan::forward(s, t);
                let v = variance_identity(traj, plan)?;
                let tol = first_order_tol(traj, plan.span(traj));
                out.push(
                    scalar("variance-identity-gap", v.relative_gap, tol, traj)
                        .with_param("s", traj.time(s))
                        .with_param("t", traj.time(t)),
                );
            }
        }
        "li-yau" => {
            let n = finite_n(name, n)?;
            for profile in &config.checks.profiles {
                for &j in &snaps {
                    let coeffs = profile.alpha_phi(k, n, traj.time(j))?;
                    out.push(residual_linear(traj, j, coeffs)?.with_param("N", n).with_param("K", k));
                }
            }
        }
        "li-yau-psi" => {
            let n = finite_n(name, n)?;
            for &j in &snaps {
                out.extend(residual_psi(traj, j, n, k)?);
            }
        }
        "gradient" => {
            for &(s, t) in &pairs {
                out.extend(gradient_estimate_check(traj, TransportPlan::forward(s, t), k)?);
            }
        }
        "log-sobolev" => {
            for &(s, t) in &pairs {
                out.extend(local_logsob_check(traj, TransportPlan::forward(s, t), k)?);
            }
        }
        "lipschitz" => out.extend(lipschitz_decay(traj, k)?),
        "entropy" => {
            let phi = test_field(config, traj.grid())?;
            if let Some(&t) = snaps.last() {
                let prof = entropy_profile(traj, t, &phi)?;
                out.push(
                    scalar("entropy-production-gap", prof.relative_gap, first_order_tol(traj, traj.time(t)), traj)
                        .with_param("t", traj.time(t)),
                );
            }
            for &(s, t) in &pairs {
                if n.is_finite() {
                    if k.abs() < K_ZERO {
                        out.extend(check_exp_uu(traj, s, t, &phi, n)?);
                    } else {
                        out.extend(check_log_sob_weak(traj, s, t, &phi, k, n)?);
                    }
                }
            }
        }
        "harnack" => {
            let n = finite_n(name, n)?;
            let grid = traj.grid();
            for pair in &config.checks.harnack_pairs {
                let (x1, x2) = (grid.nearest(pair.x1), grid.nearest(pair.x2));
                let (k1, k2) = (traj.index_at(pair.t1), traj.index_at(pair.t2));
                for mode in &config.checks.harnack_modes {
                    let (r, _) = verify_harnack(traj, x1, k1, x2, k2, mode, n, k, disc_tolerance(traj))?;
                    out.push(r);
                }
            }
        }
        other => return Err(Error::Config(format!("unknown check '{other}'"))),
    }
    Ok(out)
}

/// Evaluate the configured checks (all, or those named in `only`) on a solved
/// trajectory. Checks run in parallel; the output order follows `checks.run`.
pub fn evaluate_checks(
    config: &ExperimentConfig,
    setup: &Setup,
    traj: &Trajectory,
    only: Option<&[String]>,
) -> Result<Vec<CheckOutcome>> {
    let names: Vec<&String> =
        config.checks.run.iter().filter(|c| only.is_none_or(|o| o.iter().any(|x| x == *c))).collect();
    let results: Vec<Result<Vec<CheckOutcome>>> = names
        .par_iter()
        .map(|name| {
            one_check(name, config, setup, traj)
                .map(|rs| rs.into_iter().map(|report| CheckOutcome { check: name.to_string(), report }).collect())
                .map_err(|e| Error::Check { check: name.to_string(), source: Box::new(e) })
        })
        .collect();
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

/// CSV with node coordinates and the solution at `t = 0` and every snapshot.
pub fn write_fields_csv(path: &Path, traj: &Trajectory, indices: &[usize]) -> Result<()> {
    let grid = traj.grid();
    let mut f = std::io::BufWriter::new(fs::File::create(path)?);
    let mut header = if grid.dim() == 2 { "x,y".to_string() } else { "x".to_string() };
    for &k in indices {
        header.push_str(&format!(",u_t={}", traj.time(k)));
    }
    writeln!(f, "{header}")?;
    for i in 0..grid.len() {
        let x = grid.coords(i);
        let mut row = if grid.dim() == 2 { format!("{},{}", x[0], x[1]) } else { format!("{}", x[0]) };
        for &k in indices {
            row.push_str(&format!(",{}", traj.state(k)[i]));
        }
        writeln!(f, "{row}")?;
    }
    f.flush()?;
    Ok(())
}

/// Solve the configured flow. Returns the setup, trajectory and wall-clock seconds.
pub fn solve(config: &ExperimentConfig) -> Result<(Setup, Trajectory, f64)> {
    let setup = config.setup()?;
    let clock = Instant::now();
    let traj = solve_heat_flow(&setup.metric, &setup.measure, &setup.initial, setup.options)?;
    Ok((setup, traj, clock.elapsed().as_secs_f64()))
}

fn out_dir(root: &Path, config: &ExperimentConfig) -> Result<PathBuf> {
    let dir = root.join(&config.name);
    fs::create_dir_all(dir.join("reports"))?;
    Ok(dir)
}

/// Solve, run the checks and write `fields.csv`, one JSON file per report and
/// `manifest.json` under `root/<name>/`.
pub fn run(config: &ExperimentConfig, root: &Path, only: Option<&[String]>) -> Result<RunManifest> {
    config.validate()?;
    let (setup, traj, solve_seconds) = solve(config)?;
    let dir = out_dir(root, config)?;
    let mut fields_idx = vec![0];
    fields_idx.extend(snapshot_indices(config, &traj));
    write_fields_csv(&dir.join("fields.csv"), &traj, &fields_idx)?;
    let clock = Instant::now();
    let outcomes = evaluate_checks(config, &setup, &traj, only)?;
    let check_seconds = clock.elapsed().as_secs_f64();
    let mut reports = Vec::with_capacity(outcomes.len());
    for (i, o) in outcomes.iter().enumerate() {
        let rel = format!("reports/{i:03}-{}-{}.json", o.check, o.report.name);
        fs::write(dir.join(&rel), serde_json::to_string_pretty(&o.report)?)?;
        reports.push(ReportEntry {
            check: o.check.clone(),
            name: o.report.name.clone(),
            path: rel,
            passed: o.report.passed(),
            worst_residual: o.report.worst_residual,
            tolerance: o.report.tolerance,
            violation_count: o.report.violation_count,
        });
    }
    let manifest = RunManifest {
        schema_version: MANIFEST_SCHEMA_VERSION,
        name: config.name.clone(),
        config_hash: config_hash(config),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: config.seed,
        curvature: setup.curvature,
        fields_csv: "fields.csv".into(),
        failed: reports.iter().filter(|r| !r.passed).count(),
        reports,
        solve_seconds,
        check_seconds,
    };
    fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)?)?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_fields_are_seeded() {
        let g = TorusGrid::new(2, 8, 1.0).unwrap();
        assert_eq!(random_fields(&g, 7, 3), random_fields(&g, 7, 3));
        assert_ne!(random_fields(&g, 7, 1), random_fields(&g, 8, 1));
    }

    #[test]
    fn pairs_start_at_zero() {
        assert_eq!(consecutive_pairs(&[3, 7]), vec![(0, 3), (3, 7)]);
    }
}
