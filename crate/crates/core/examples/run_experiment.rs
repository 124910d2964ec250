//! Run a configuration file and print the manifest.
//!
//!     cargo run --example run_experiment -- configs/randers-2d.toml

use std::path::{Path, PathBuf};

use finsler_lab::experiments::{run, ExperimentConfig};

fn main() -> finsler_lab::Result<()> {
    let path = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/euclidean-1d.toml")
    });
    let config = ExperimentConfig::load(&path)?;
    let root = std::env::var_os("FINSLER_LAB_OUT").map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    let manifest = run(&config, &root, None)?;
    for r in &manifest.reports {
        println!("{:<14} {:<26} {} {:+.3e}", r.check, r.name, if r.passed { "ok  " } else { "FAIL" }, r.worst_residual);
    }
    println!("config hash {}", manifest.config_hash);
    println!("{} failed; outputs in {}", manifest.failed, root.join(&manifest.name).display());
    Ok(())
}
