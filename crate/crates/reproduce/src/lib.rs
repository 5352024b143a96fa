//! Path measurements used by the acceptance suite in `tests/acceptance.rs`.

use egma::Path;

/// Largest `|x_axis|` over the interior nodes.
pub fn max_interior_abs(path: &Path, axis: usize) -> f64 {
    let n = path.n_segments();
    (1..n).map(|j| path.node(j)[axis].abs()).fold(0.0, f64::max)
}

/// Smallest Euclidean distance from a node to `point`.
pub fn min_node_distance(path: &Path, point: &[f64]) -> f64 {
    path.nodes()
        .map(|x| x.iter().zip(point).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
        .fold(f64::INFINITY, f64::min)
}

/// First index where the sequence drops, if any.
pub fn first_drop(values: &[f64]) -> Option<usize> {
    values.windows(2).position(|w| w[1] < w[0]).map(|i| i + 1)
}

/// Largest deviation between two paths with the same layout, scaled by
/// `1 + max |x|`.
pub fn relative_node_gap(a: &Path, b: &Path) -> f64 {
    let scale = 1.0 + a.as_flat().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    a.as_flat().iter().zip(b.as_flat()).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max) / scale
}
