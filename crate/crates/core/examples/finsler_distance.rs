//! Grid distances for a Randers norm. The drift makes travel against `b`
//! cheaper, so the distance is not symmetric.

use finsler_lab::geometry::{distances_from, finsler_distance, TorusGrid};
use finsler_lab::linalg::Sym2;
use finsler_lab::metric::{MetricField, NormDescriptor};

fn main() -> finsler_lab::Result<()> {
    let grid = TorusGrid::new(2, 64, 1.0)?;
    let desc = NormDescriptor::randers(2, Sym2::IDENTITY, [0.4, 0.0])?;
    let metric = MetricField::uniform(grid, desc)?;

    let a = grid.nearest([0.25, 0.5]);
    let b = grid.nearest([0.5, 0.5]);
    println!("d(a -> b) = {:.5}   exact F(b - a) = {:.5}", finsler_distance(&metric, a, b), desc.norm([0.25, 0.0]));
    println!("d(b -> a) = {:.5}   exact F(a - b) = {:.5}", finsler_distance(&metric, b, a), desc.norm([-0.25, 0.0]));

    let d = distances_from(&metric, a);
    let far = d.iter().cloned().fold(0.0, f64::max);
    println!("largest distance from a: {far:.5}");
    Ok(())
}
