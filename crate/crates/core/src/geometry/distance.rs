use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::metric::MetricField;

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

fn neighbor_steps(dim: usize) -> &'static [(isize, isize)] {
    if dim == 1 {
        &[(1, 0), (-1, 0)]
    } else {
        &[(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)]
    }
}

/// Directed graph distances `d(source, x)` to every node.
///
/// Edges join each node to its 2 (1D) or 8 (2D) neighbours; an edge from
/// `x` to `z` costs `F(mid, z - x)`, with the midpoint norm taken as the mean
/// of the norms at both ends.
pub fn distances_from(metric: &MetricField, source: usize) -> Vec<f64> {
    let grid = *metric.grid();
    let h = grid.spacing();
    let mut dist = vec![f64::INFINITY; grid.len()];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Entry(0.0, source));
    let uniform = metric.as_uniform().copied();
    while let Some(Entry(d, i)) = heap.pop() {
        if d > dist[i] {
            continue;
        }
        for &(dx, dy) in neighbor_steps(grid.dim()) {
            let j = grid.shift(i, dx, dy);
            let step = [dx as f64 * h, dy as f64 * h];
            let cost = match &uniform {
                Some(desc) => desc.norm(step),
                None => 0.5 * (metric.at(i).norm(step) + metric.at(j).norm(step)),
            };
            let nd = d + cost;
            if nd < dist[j] {
                dist[j] = nd;
                heap.push(Entry(nd, j));
            }
        }
    }
    dist
}

/// Directed distance `d(from, to)`.
pub fn finsler_distance(metric: &MetricField, from: usize, to: usize) -> f64 {
    distances_from(metric, from)[to]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::TorusGrid;
    use crate::linalg::Sym2;
    use crate::metric::NormDescriptor;

    #[test]
    fn asymmetric_line_distance() {
        let g = TorusGrid::new(1, 64, 1.0).unwrap();
        let m = MetricField::uniform(g, NormDescriptor::asym_1d(2.0, 1.0).unwrap()).unwrap();
        let h = g.spacing();
        let fwd = finsler_distance(&m, 0, 5);
        let back = finsler_distance(&m, 5, 0);
        assert!((fwd - 2.0 * 5.0 * h).abs() < 1e-14);
        assert!((back - 5.0 * h).abs() < 1e-14);
        // going the long way round is cheaper backwards
        let far = finsler_distance(&m, 0, 40);
        assert!((far - 24.0 * h).abs() < 1e-14);
    }

    #[test]
    fn euclidean_axis_distance_is_exact() {
        let g = TorusGrid::new(2, 32, 1.0).unwrap();
        let m = MetricField::uniform(g, NormDescriptor::euclidean(2).unwrap()).unwrap();
        let d = finsler_distance(&m, g.index(0, 0), g.index(7, 0));
        assert!((d - 7.0 * g.spacing()).abs() < 1e-14);
        let diag = finsler_distance(&m, g.index(0, 0), g.index(5, 5));
        assert!((diag - 5.0 * 2f64.sqrt() * g.spacing()).abs() < 1e-13);
    }

    #[test]
    fn randers_asymmetry_is_bounded() {
        let g = TorusGrid::new(2, 32, 1.0).unwrap();
        let m = MetricField::uniform(g, NormDescriptor::randers(2, Sym2::IDENTITY, [0.5, 0.0]).unwrap()).unwrap();
        let a = g.index(3, 4);
        let b = g.index(11, 9);
        let ab = finsler_distance(&m, a, b);
        let ba = finsler_distance(&m, b, a);
        let r = ab.max(ba) / ab.min(ba);
        assert!(r <= 3.0 * 1.05 && r > 1.0);
    }
}
