use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use finsler_lab::experiments::{convergence_table, run, ExperimentConfig, RunManifest};
use finsler_lab::harnack::{harnack_bound, HarnackMode};
use finsler_lab::liyau::{LiYauProfile, PsiEvaluator};

/// Heat flow and Li-Yau/Harnack diagnostics on Finsler tori.
///
/// Outputs go under $FINSLER_LAB_OUT (default `out`).
#[derive(Parser)]
#[command(name = "finsler-lab", version)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Solve the configured flow and write fields.csv and manifest.json.
    Solve { config: PathBuf },
    /// Solve and run the configured checks; exit status 1 if any fails.
    Check {
        config: PathBuf,
        /// Only run these checks (repeatable).
        #[arg(long = "only")]
        only: Vec<String>,
    },
    /// Run every ladder level and write convergence.csv / convergence.json.
    Convergence { config: PathBuf },
    /// Print `x, Psi(x), Psi'(x)` as CSV.
    Psi {
        #[arg(long)]
        n: f64,
        #[arg(long, allow_hyphen_values = true)]
        k: f64,
        #[arg(long)]
        t: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = -5.0)]
        from: f64,
        /// Defaults to just below the upper limit (or 5 when there is none).
        #[arg(long, allow_hyphen_values = true)]
        to: Option<f64>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Print Harnack constants against distance as CSV.
    HarnackBounds {
        #[arg(long)]
        n: f64,
        #[arg(long, allow_hyphen_values = true)]
        k: f64,
        #[arg(long)]
        t1: f64,
        #[arg(long)]
        t2: f64,
        #[arg(long, default_value_t = 1.0)]
        d_max: f64,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        /// Bound modes to tabulate (repeatable).
        #[arg(long = "mode", value_enum, default_values_t = [ModeArg::Lf, ModeArg::Quadratic])]
        modes: Vec<ModeArg>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Lf,
    Quadratic,
    LiXu,
}

impl ModeArg {
    fn mode(self) -> HarnackMode {
        match self {
            ModeArg::Lf => HarnackMode::Lf,
            ModeArg::Quadratic => HarnackMode::Integral { profile: LiYauProfile::Quadratic },
            ModeArg::LiXu => HarnackMode::Integral { profile: LiYauProfile::LiXu },
        }
    }

    fn label(self) -> &'static str {
        match self {
            ModeArg::Lf => "lf",
            ModeArg::Quadratic => "quadratic",
            ModeArg::LiXu => "li-xu",
        }
    }
}

fn out_root() -> PathBuf {
    std::env::var_os("FINSLER_LAB_OUT").map(PathBuf::from).unwrap_or_else(|| PathBuf::from("out"))
}

fn print_manifest(m: &RunManifest, root: &Path) {
    for r in &m.reports {
        println!(
            "{:<12} {:<28} {} worst={:+.3e} tol={:.3e}",
            r.check,
            r.name,
            if r.passed { "PASS" } else { "FAIL" },
            r.worst_residual,
            r.tolerance
        );
    }
    println!(
        "{}: {} reports, {} failed, solve {:.2}s, checks {:.2}s -> {}",
        m.name,
        m.reports.len(),
        m.failed,
        m.solve_seconds,
        m.check_seconds,
        root.join(&m.name).display()
    );
}

fn main_inner(cli: Cli) -> finsler_lab::Result<ExitCode> {
    let root = out_root();
    match cli.verb {
        Verb::Solve { config } => {
            let cfg = ExperimentConfig::load(&config)?;
            let m = run(&cfg, &root, Some(&[]))?;
            print_manifest(&m, &root);
            Ok(ExitCode::SUCCESS)
        }
        Verb::Check { config, only } => {
            let cfg = ExperimentConfig::load(&config)?;
            let filter = if only.is_empty() { None } else { Some(only.as_slice()) };
            let m = run(&cfg, &root, filter)?;
            print_manifest(&m, &root);
            Ok(ExitCode::from(m.exit_code() as u8))
        }
        Verb::Convergence { config } => {
            let cfg = ExperimentConfig::load(&config)?;
            let table = convergence_table(&cfg)?;
            table.write(&root.join(&cfg.name))?;
            print!("{}", table.to_csv());
            Ok(if table.failures() == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Verb::Psi { n, k, t, from, to, samples } => {
            let psi = PsiEvaluator::new(n, k, t)?;
            let limit = psi.upper_limit();
            let to = to.unwrap_or(if limit.is_finite() { limit - 1e-3 * (limit - from).abs() } else { 5.0 });
            println!("x,psi,dpsi");
            for i in 0..samples.max(2) {
                let x = from + (to - from) * i as f64 / (samples.max(2) - 1) as f64;
                println!("{x},{},{}", psi.value(x)?, psi.derivative(x)?);
            }
            Ok(ExitCode::SUCCESS)
        }
        Verb::HarnackBounds { n, k, t1, t2, d_max, samples, modes } => {
            let header: Vec<&str> = modes.iter().map(|m| m.label()).collect();
            println!("d,{}", header.join(","));
            for i in 0..samples.max(2) {
                let d = d_max * i as f64 / (samples.max(2) - 1) as f64;
                let mut row = format!("{d}");
                for m in &modes {
                    row.push_str(&format!(",{}", harnack_bound(&m.mode(), n, k, d, t1, t2)?));
                }
                println!("{row}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
