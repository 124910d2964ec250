//! Refinement study of the heat solver against the exact Fourier solution,
//! through the convergence table of a configuration.

use std::path::Path;

use finsler_lab::experiments::{convergence_table, ExperimentConfig, LadderLevel};

fn main() -> finsler_lab::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/euclidean-1d.toml");
    let mut config = ExperimentConfig::load(&path)?;
    // every snapshot must fall on a step
    let unit = config.time.snapshots[0];
    config.ladder = [64usize, 128, 256]
        .iter()
        .map(|&nodes| {
            let h2 = (1.0 / nodes as f64).powi(2);
            LadderLevel { nodes, dt: unit / (unit / h2).round() }
        })
        .collect();
    let table = convergence_table(&config)?;
    print!("{}", table.to_csv());
    let e = table.row("heat-linf-error").expect("exact solution available");
    println!("observed order in h: {:.3}", e.order_h);
    Ok(())
}
