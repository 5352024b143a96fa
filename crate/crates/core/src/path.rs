//! Discrete paths `phi_j ~ phi(j / N)` with fixed endpoints.
//!
//! Nodes are stored contiguously, `dim` coordinates per node. Paths are
//! values: every operation that moves nodes returns a new path.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Path {
    dim: usize,
    nodes: Vec<f64>,
}

/// Central differences of a path at its interior nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct PathDerivatives {
    /// `(phi_{j+1} - phi_{j-1}) / 2h` for `j = 1..N-1`, flattened.
    pub first: Vec<f64>,
    /// `(phi_{j+1} - 2 phi_j + phi_{j-1}) / h^2` for `j = 1..N-1`, flattened.
    pub second: Vec<f64>,
    pub dim: usize,
}

impl PathDerivatives {
    /// First difference at interior node `j` (1-based, `1..N`).
    pub fn first_at(&self, j: usize) -> &[f64] {
        &self.first[(j - 1) * self.dim..j * self.dim]
    }

    pub fn second_at(&self, j: usize) -> &[f64] {
        &self.second[(j - 1) * self.dim..j * self.dim]
    }

    pub fn len(&self) -> usize {
        self.first.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.first.is_empty()
    }
}

pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt()
}

impl Path {
    /// Builds a path from flattened node coordinates.
    pub fn from_flat(dim: usize, nodes: Vec<f64>) -> Result<Path> {
        if dim == 0 || nodes.len() % dim != 0 {
            return Err(Error::InvalidArgument(format!(
                "{} coordinates do not split into nodes of dimension {dim}",
                nodes.len()
            )));
        }
        if nodes.len() / dim < 3 {
            return Err(Error::InvalidArgument("a path needs at least 3 nodes (N >= 2)".into()));
        }
        Ok(Path { dim, nodes })
    }

    pub fn from_nodes<P: AsRef<[f64]>>(nodes: &[P]) -> Result<Path> {
        let dim = nodes.first().map_or(0, |p| p.as_ref().len());
        let mut flat = Vec::with_capacity(dim * nodes.len());
        for p in nodes {
            let p = p.as_ref();
            if p.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: p.len() });
            }
            flat.extend_from_slice(p);
        }
        Path::from_flat(dim, flat)
    }

    /// `nodes[j] = start + (j / N)(end - start)`.
    pub fn linear(start: &[f64], end: &[f64], n_segments: usize) -> Result<Path> {
        if start.len() != end.len() {
            return Err(Error::DimensionMismatch { expected: start.len(), got: end.len() });
        }
        if n_segments < 2 {
            return Err(Error::InvalidArgument("N must be at least 2".into()));
        }
        let n = n_segments as f64;
        let mut flat = Vec::with_capacity(start.len() * (n_segments + 1));
        for j in 0..=n_segments {
            if j == n_segments {
                flat.extend_from_slice(end);
            } else {
                let t = j as f64 / n;
                flat.extend(start.iter().zip(end).map(|(a, b)| a + t * (b - a)));
            }
        }
        Path::from_flat(start.len(), flat)
    }

    /// The polyline through `waypoints`, resampled to `N + 1` nodes equally
    /// spaced in arclength.
    pub fn through_waypoints<P: AsRef<[f64]>>(waypoints: &[P], n_segments: usize) -> Result<Path> {
        if waypoints.len() < 2 {
            return Err(Error::InvalidArgument("need at least two waypoints".into()));
        }
        if n_segments < 2 {
            return Err(Error::InvalidArgument("N must be at least 2".into()));
        }
        let dim = waypoints[0].as_ref().len();
        let mut flat = Vec::with_capacity(dim * waypoints.len());
        for p in waypoints {
            let p = p.as_ref();
            if p.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: p.len() });
            }
            flat.extend_from_slice(p);
        }
        resample(dim, &flat, n_segments)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of segments `N`.
    pub fn n_segments(&self) -> usize {
        self.nodes.len() / self.dim - 1
    }

    pub fn node(&self, j: usize) -> &[f64] {
        &self.nodes[j * self.dim..(j + 1) * self.dim]
    }

    pub fn start(&self) -> &[f64] {
        self.node(0)
    }

    pub fn end(&self) -> &[f64] {
        self.node(self.n_segments())
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = &[f64]> {
        self.nodes.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.nodes
    }

    pub fn into_flat(self) -> Vec<f64> {
        self.nodes
    }

    pub fn segment_lengths(&self) -> Vec<f64> {
        self.nodes
            .chunks_exact(self.dim)
            .zip(self.nodes.chunks_exact(self.dim).skip(1))
            .map(|(a, b)| distance(a, b))
            .collect()
    }

    pub fn length(&self) -> f64 {
        self.segment_lengths().iter().sum()
    }

    /// Largest relative deviation of a segment length from the mean.
    pub fn spacing_deviation(&self) -> f64 {
        let seg = self.segment_lengths();
        let mean = seg.iter().sum::<f64>() / seg.len() as f64;
        if mean == 0.0 {
            return 0.0;
        }
        seg.iter().fold(0.0_f64, |m, s| m.max((s - mean).abs())) / mean
    }

    /// Equal-arclength reparametrization: node `j` is placed at arclength
    /// `j L / N` along the current polyline by linear interpolation, found in
    /// one forward sweep. A target that coincides with a vertex resolves to
    /// the segment on its left. Endpoints are copied exactly.
    ///
    /// On curved paths the new chords are equal only up to the corner cutting
    /// of one interpolation pass; [`Path::equalized`] removes that residual.
    pub fn reparametrized(&self) -> Result<Path> {
        resample_arclength(self.dim, &self.nodes, self.n_segments())
    }

    /// Nodes on the current polyline with all segments of equal length.
    /// Endpoints are copied exactly.
    pub fn equalized(&self) -> Result<Path> {
        resample(self.dim, &self.nodes, self.n_segments())
    }

    /// Central differences with `h = 1/N` at `j = 1..N-1`.
    pub fn derivatives(&self) -> PathDerivatives {
        let n = self.n_segments();
        let h = 1.0 / n as f64;
        let d = self.dim;
        let mut first = Vec::with_capacity(d * (n - 1));
        let mut second = Vec::with_capacity(d * (n - 1));
        for j in 1..n {
            let (prev, cur, next) = (self.node(j - 1), self.node(j), self.node(j + 1));
            for k in 0..d {
                first.push((next[k] - prev[k]) / (2.0 * h));
                second.push((next[k] - 2.0 * cur[k] + prev[k]) / (h * h));
            }
        }
        PathDerivatives { first, second, dim: d }
    }

    /// `phi'` at every node (flattened): central differences inside,
    /// one-sided at the two endpoints.
    pub fn velocity(&self) -> Vec<f64> {
        let n = self.n_segments();
        let nf = n as f64;
        let mut v = Vec::with_capacity(self.nodes.len());
        for j in 0..=n {
            let (a, b, w) = match j {
                0 => (0, 1, nf),
                j if j == n => (n - 1, n, nf),
                j => (j - 1, j + 1, nf / 2.0),
            };
            let (pa, pb) = (self.node(a), self.node(b));
            v.extend(pa.iter().zip(pb).map(|(x, y)| w * (y - x)));
        }
        v
    }

    /// `|phi'|` at every node, see [`Path::velocity`].
    pub fn speed(&self) -> Vec<f64> {
        self.velocity()
            .chunks_exact(self.dim)
            .map(|v| v.iter().map(|c| c * c).sum::<f64>().sqrt())
            .collect()
    }

    /// Symmetric Hausdorff distance between the two polylines, measured from
    /// the nodes of each to the segments of the other.
    pub fn hausdorff_distance(&self, other: &Path) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        Ok(directed_hausdorff(self, other).max(directed_hausdorff(other, self)))
    }
}

fn directed_hausdorff(from: &Path, to: &Path) -> f64 {
    from.nodes()
        .map(|p| {
            to.nodes()
                .zip(to.nodes().skip(1))
                .map(|(a, b)| point_segment_distance(p, a, b))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

fn point_segment_distance(p: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let mut ab2 = 0.0;
    let mut ap_ab = 0.0;
    for k in 0..p.len() {
        let ab = b[k] - a[k];
        ab2 += ab * ab;
        ap_ab += (p[k] - a[k]) * ab;
    }
    let t = if ab2 > 0.0 { (ap_ab / ab2).clamp(0.0, 1.0) } else { 0.0 };
    p.iter()
        .zip(a.iter().zip(b))
        .map(|(pk, (ak, bk))| {
            let q = ak + t * (bk - ak);
            (pk - q) * (pk - q)
        })
        .sum::<f64>()
        .sqrt()
}

/// Equal-arclength resampling of the polyline `src` (flattened) to
/// `n_segments + 1` nodes. Target `l_j = j L / N` is placed on the segment
/// `i` with `L_i < l_j <= L_{i+1}`, found by a single forward sweep.
fn resample_arclength(dim: usize, src: &[f64], n_segments: usize) -> Result<Path> {
    let m = src.len() / dim - 1;
    let node = |i: usize| &src[i * dim..(i + 1) * dim];
    let mut cumulative = Vec::with_capacity(m + 1);
    cumulative.push(0.0);
    for i in 0..m {
        let last = cumulative[i];
        cumulative.push(last + distance(node(i), node(i + 1)));
    }
    let total = cumulative[m];
    if !(total > 0.0) {
        return Err(Error::ZeroLength);
    }

    let mut out = Vec::with_capacity(dim * (n_segments + 1));
    out.extend_from_slice(node(0));
    let mut i = 0;
    for j in 1..n_segments {
        let target = j as f64 * total / n_segments as f64;
        while i + 1 < m && !(cumulative[i + 1] >= target) {
            i += 1;
        }
        let seg = cumulative[i + 1] - cumulative[i];
        let (a, b) = (node(i), node(i + 1));
        let t = if seg > 0.0 { (target - cumulative[i]) / seg } else { 0.0 };
        out.extend(a.iter().zip(b).map(|(p, q)| p + t * (q - p)));
    }
    out.extend_from_slice(node(m));
    Path::from_flat(dim, out)
}


const SPACING_EXACT: f64 = 1e-13;
const CHORD_TOL: f64 = 1e-13;
const NEWTON_ITERS: usize = 40;
const LINE_SEARCH_HALVINGS: usize = 12;

/// A polyline parametrized by arclength.
struct Polyline<'a> {
    dim: usize,
    src: &'a [f64],
    cumulative: Vec<f64>,
}

impl<'a> Polyline<'a> {
    fn new(dim: usize, src: &'a [f64]) -> Self {
        let m = src.len() / dim - 1;
        let mut cumulative = Vec::with_capacity(m + 1);
        cumulative.push(0.0);
        for i in 0..m {
            let d = distance(&src[i * dim..(i + 1) * dim], &src[(i + 1) * dim..(i + 2) * dim]);
            cumulative.push(cumulative[i] + d);
        }
        Polyline { dim, src, cumulative }
    }

    fn length(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    /// Point and unit tangent at arclength `s`, written into `p` and `t`.
    fn locate(&self, s: f64, p: &mut [f64], t: &mut [f64]) {
        let m = self.cumulative.len() - 1;
        let mut i = self.cumulative.partition_point(|&c| c < s).clamp(1, m) - 1;
        while i + 1 < m && self.cumulative[i + 1] == self.cumulative[i] {
            i += 1;
        }
        let d = self.dim;
        let (a, b) = (&self.src[i * d..(i + 1) * d], &self.src[(i + 1) * d..(i + 2) * d]);
        let seg = self.cumulative[i + 1] - self.cumulative[i];
        let u = if seg > 0.0 { ((s - self.cumulative[i]) / seg).clamp(0.0, 1.0) } else { 0.0 };
        for k in 0..d {
            p[k] = a[k] + u * (b[k] - a[k]);
            t[k] = if seg > 0.0 { (b[k] - a[k]) / seg } else { 0.0 };
        }
    }
}

/// Chord residuals `|p_{j+1} - p_j| - c` for nodes at arclengths `s`.
fn chord_residuals(line: &Polyline, s: &[f64], c: f64, pts: &mut [f64], tan: &mut [f64]) -> Vec<f64> {
    let d = line.dim;
    for (j, &sj) in s.iter().enumerate() {
        let (p, t) = (&mut pts[j * d..(j + 1) * d], &mut tan[j * d..(j + 1) * d]);
        line.locate(sj, p, t);
    }
    let n = s.len() - 1;
    let last = line.src.len() - d;
    pts[n * d..].copy_from_slice(&line.src[last..]);
    pts[..d].copy_from_slice(&line.src[..d]);
    (0..n).map(|j| distance(&pts[j * d..(j + 1) * d], &pts[(j + 1) * d..(j + 2) * d]) - c).collect()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Nodes on the polyline `src` with all consecutive chords equal.
///
/// Starts from the equal-arclength nodes and solves for arclength positions
/// `s_j` and a common chord `c` with `|P(s_{j+1}) - P(s_j)| = c` by damped
/// Newton iteration. The Jacobian is bidiagonal in `s` plus one dense column
/// for `c`, so each iteration is `O(N)`. If the iteration stalls (a fold
/// sharper than the node spacing), the more uniform of the two candidates is
/// returned.
fn resample(dim: usize, src: &[f64], n_segments: usize) -> Result<Path> {
    let first = resample_arclength(dim, src, n_segments)?;
    if first.spacing_deviation() <= SPACING_EXACT {
        return Ok(first);
    }
    let line = Polyline::new(dim, src);
    let total = line.length();
    let n = n_segments;
    let mut s: Vec<f64> = (0..=n).map(|j| j as f64 * total / n as f64).collect();
    s[n] = total;
    let mut pts = vec![0.0; dim * (n + 1)];
    let mut tan = vec![0.0; dim * (n + 1)];
    let mut c = first.length() / n as f64;
    let mut f = chord_residuals(&line, &s, c, &mut pts, &mut tan);
    let mut best = max_abs(&f);

    let mut p = vec![0.0; n + 1];
    let mut q = vec![0.0; n + 1];
    let mut alpha = vec![0.0; n];
    let mut beta = vec![0.0; n];
    for _ in 0..NEWTON_ITERS {
        if best <= CHORD_TOL * c {
            break;
        }
        for j in 0..n {
            let (a, b) = (&pts[j * dim..(j + 1) * dim], &pts[(j + 1) * dim..(j + 2) * dim]);
            let len = f[j] + c;
            let (mut da, mut db) = (0.0, 0.0);
            for k in 0..dim {
                let u = if len > 0.0 { (b[k] - a[k]) / len } else { 0.0 };
                da -= u * tan[j * dim + k];
                db += u * tan[(j + 1) * dim + k];
            }
            alpha[j] = da;
            beta[j] = db;
        }
        // delta s_j = p_j + q_j delta c, eliminated forward along the chain
        let mut ok = true;
        for j in 0..n - 1 {
            if beta[j].abs() < 1e-12 {
                ok = false;
                break;
            }
            p[j + 1] = (-f[j] - alpha[j] * p[j]) / beta[j];
            q[j + 1] = (1.0 - alpha[j] * q[j]) / beta[j];
        }
        let denom = 1.0 - alpha[n - 1] * q[n - 1];
        if !ok || denom.abs() < 1e-300 {
            break;
        }
        let dc = (f[n - 1] + alpha[n - 1] * p[n - 1]) / denom;

        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..LINE_SEARCH_HALVINGS {
            let trial: Vec<f64> = (0..=n)
                .map(|j| if j == 0 || j == n { s[j] } else { s[j] + lambda * (p[j] + q[j] * dc) })
                .collect();
            let ordered = trial.windows(2).all(|w| w[0] <= w[1]);
            let ct = c + lambda * dc;
            if ordered && ct > 0.0 {
                let ft = chord_residuals(&line, &trial, ct, &mut pts, &mut tan);
                let r = max_abs(&ft);
                if r < 0.9 * best {
                    s = trial;
                    c = ct;
                    f = ft;
                    best = r;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    // pts may hold a rejected trial; rebuild from the accepted positions
    chord_residuals(&line, &s, c, &mut pts, &mut tan);
    let solved = Path::from_flat(dim, pts)?;
    if solved.spacing_deviation() < first.spacing_deviation() {
        Ok(solved)
    } else {
        Ok(first)
    }
}
