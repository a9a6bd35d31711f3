//! Points on the torus `[-1/2, 1/2)^d`, node sets and their spacing measures.
//!
//! Distances use the wrap-around sup-norm, `dist(x, y) = min_j ||x - y + j||_inf`
//! over integer shifts `j`, so every distance lies in `[0, 1/2]`.

use std::cmp::Ordering;
use std::path::Path;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};

/// Reduces a real coordinate into `[-1/2, 1/2)`.
pub fn canonicalize(x: f64) -> f64 {
    let mut r = x - (x + 0.5).floor();
    // (x + 0.5).floor() can round the wrong way right next to the seam.
    if r >= 0.5 {
        r -= 1.0;
    }
    if r < -0.5 {
        r += 1.0;
    }
    r
}

/// Wrap-around distance of two scalar coordinates.
#[inline]
pub fn coord_dist(a: f64, b: f64) -> f64 {
    let t = (a - b).abs().rem_euclid(1.0);
    t.min(1.0 - t)
}

/// A point of the torus with canonical coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusPoint {
    coords: Vec<f64>,
}

impl TorusPoint {
    /// Builds a point, reducing every coordinate into `[-1/2, 1/2)`.
    pub fn new(coords: impl Into<Vec<f64>>) -> Result<Self> {
        let mut coords = coords.into();
        if coords.is_empty() {
            return Err(invalid("coords", "a point needs at least one coordinate"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(invalid("coords", "coordinates must be finite"));
        }
        for c in &mut coords {
            *c = canonicalize(*c);
        }
        Ok(Self { coords })
    }

    pub fn origin(dim: usize) -> Self {
        Self {
            coords: vec![0.0; dim.max(1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

/// Torus distance of two points.
pub fn torus_dist(x: &TorusPoint, y: &TorusPoint) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: y.dim(),
        });
    }
    Ok(slice_dist(x.coords(), y.coords()))
}

#[inline]
pub(crate) fn slice_dist(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| coord_dist(*a, *b))
        .fold(0.0, f64::max)
}

/// An ordered set of pairwise distinct nodes on the torus.
#[derive(Debug)]
pub struct NodeSet {
    dim: usize,
    coords: Vec<f64>,
    sep: OnceLock<f64>,
}

impl Clone for NodeSet {
    fn clone(&self) -> Self {
        let sep = OnceLock::new();
        if let Some(q) = self.sep.get() {
            let _ = sep.set(*q);
        }
        Self {
            dim: self.dim,
            coords: self.coords.clone(),
            sep,
        }
    }
}

impl PartialEq for NodeSet {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.coords == other.coords
    }
}

impl NodeSet {
    /// Builds a node set from flat row-major coordinates (`M * dim` values).
    ///
    /// Coordinates are canonicalized first; exact duplicates are rejected.
    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("dim", "dimension must be at least 1"));
        }
        if coords.len() % dim != 0 {
            return Err(Error::LengthMismatch {
                expected: (coords.len() / dim + 1) * dim,
                found: coords.len(),
            });
        }
        if coords.is_empty() {
            return Err(Error::TooFewNodes {
                required: 1,
                found: 0,
            });
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(invalid("coords", "coordinates must be finite"));
        }
        let coords: Vec<f64> = coords.into_iter().map(canonicalize).collect();
        let set = Self {
            dim,
            coords,
            sep: OnceLock::new(),
        };
        set.check_distinct()?;
        Ok(set)
    }

    pub fn from_points(points: &[TorusPoint]) -> Result<Self> {
        let dim = points.first().map(TorusPoint::dim).ok_or(Error::TooFewNodes {
            required: 1,
            found: 0,
        })?;
        let mut flat = Vec::with_capacity(points.len() * dim);
        for p in points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
            flat.extend_from_slice(p.coords());
        }
        Self::from_flat(dim, flat)
    }

    fn check_distinct(&self) -> Result<()> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| self.cmp_nodes(a, b));
        for pair in order.windows(2) {
            if self.node(pair[0]) == self.node(pair[1]) {
                let (first, second) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
                return Err(Error::DuplicateNodes { first, second });
            }
        }
        Ok(())
    }

    fn cmp_nodes(&self, a: usize, b: usize) -> Ordering {
        self.node(a)
            .iter()
            .zip(self.node(b))
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn node(&self, j: usize) -> &[f64] {
        &self.coords[j * self.dim..(j + 1) * self.dim]
    }

    pub fn point(&self, j: usize) -> TorusPoint {
        TorusPoint {
            coords: self.node(j).to_vec(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.coords
    }

    /// Nodes at the given indices, in that order.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let mut flat = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            if i >= self.len() {
                return Err(invalid("indices", format!("index {i} out of range")));
            }
            flat.extend_from_slice(self.node(i));
        }
        Self::from_flat(self.dim, flat)
    }

    /// The cached separation distance, if it has been computed.
    pub fn cached_separation(&self) -> Option<f64> {
        self.sep.get().copied()
    }

    /// Minimum pairwise torus distance. Computed once, then cached.
    pub fn separation_distance(&self) -> Result<f64> {
        if let Some(q) = self.sep.get() {
            return Ok(*q);
        }
        let m = self.len();
        if m < 2 {
            return Err(Error::TooFewNodes {
                required: 2,
                found: m,
            });
        }
        let mut best = f64::INFINITY;
        let mut pair = (0, 1);
        for j in 0..m {
            let xj = self.node(j);
            for l in j + 1..m {
                let d = slice_dist(xj, self.node(l));
                if d < best {
                    best = d;
                    pair = (j, l);
                }
            }
        }
        if best == 0.0 {
            return Err(Error::DuplicateNodes {
                first: pair.0,
                second: pair.1,
            });
        }
        Ok(*self.sep.get_or_init(|| best))
    }

    /// Grid-search estimate of the mesh norm `2 max_x min_j dist(x_j, x)`.
    ///
    /// Candidate points are the `resolution^d` grid `-1/2 + i/resolution`.
    /// Every torus point is within `1/(2 resolution)` of a candidate, so the
    /// returned value `v` satisfies `delta - 1/resolution <= v <= delta`,
    /// which is inside the documented `d / resolution` tolerance.
    pub fn mesh_norm(&self, resolution: usize) -> Result<f64> {
        if resolution < 2 {
            return Err(invalid("resolution", "must be at least 2"));
        }
        let d = self.dim;
        let total = resolution
            .checked_pow(d as u32)
            .ok_or_else(|| invalid("resolution", "grid too large"))?;
        let mut cand = vec![0.0; d];
        let mut worst = 0.0f64;
        for flat in 0..total {
            let mut rest = flat;
            for c in cand.iter_mut().rev() {
                *c = -0.5 + (rest % resolution) as f64 / resolution as f64;
                rest /= resolution;
            }
            let nearest = self
                .iter()
                .map(|x| slice_dist(x, &cand))
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(nearest);
        }
        Ok(2.0 * worst)
    }

    /// Counts of nodes per distance ring around node `center`.
    ///
    /// Ring `m < K` holds nodes with `m q <= dist < (m + 1) q`, where
    /// `K = floor(1 / (2q))`; ring `K` is closed at `1/2`. The center itself
    /// lands in ring 0, so the counts sum to `M`.
    pub fn ring_histogram(&self, q: f64, center: usize) -> Result<Vec<usize>> {
        if !(q > 0.0 && q <= 0.5) {
            return Err(invalid("q", format!("must lie in (0, 1/2], got {q}")));
        }
        if center >= self.len() {
            return Err(invalid("center", format!("index {center} out of range")));
        }
        let last = (0.5 / q).floor() as usize;
        let mut counts = vec![0usize; last + 1];
        let c = self.node(center);
        for x in self.iter() {
            let ring = ((slice_dist(c, x) / q).floor() as usize).min(last);
            counts[ring] += 1;
        }
        Ok(counts)
    }

    /// Writes one node per line with `d` whitespace-separated coordinates.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut out = String::new();
        for x in self.iter() {
            let line: Vec<String> = x.iter().map(|c| format!("{c:.17e}")).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        std::fs::write(path, out).map_err(|e| Error::Io {
            path: path.display().to_string(),
            reason: e.to_string(),
        })
    }

    /// Reads a node file; coordinates outside the torus are reduced modulo 1.
    pub fn load(path: impl AsRef<Path>, dim: usize) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        Self::parse(&text, dim)
    }

    pub fn parse(text: &str, dim: usize) -> Result<Self> {
        let mut flat = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != dim {
                return Err(Error::Parse {
                    line: idx + 1,
                    reason: format!("expected {dim} coordinates, found {}", fields.len()),
                });
            }
            for f in fields {
                let v: f64 = f.parse().map_err(|_| Error::Parse {
                    line: idx + 1,
                    reason: format!("not a number: {f:?}"),
                })?;
                flat.push(v);
            }
        }
        Self::from_flat(dim, flat)
    }
}

/// Recipes for [`generate_nodes`].
#[derive(Debug, Clone, PartialEq)]
pub enum NodeGenSpec {
    /// The `n^d` grid `-1/2 + j/n`, `j = 0..n` per axis.
    Equispaced { n: usize, dim: usize },
    /// Univariate `x_j = -1/2 + (j - eps_j)/M` with `eps_j` uniform on `[0, epsilon]`.
    Jittered { m: usize, epsilon: f64 },
    /// `m` uniform nodes with pairwise distance at least `q`, by rejection.
    RandomSeparated { m: usize, q: f64, dim: usize },
    /// `m` independent uniform nodes.
    Uniform { m: usize, dim: usize },
}

/// Builds a node set from a recipe; deterministic for a fixed seed.
pub fn generate_nodes(spec: &NodeGenSpec, seed: u64) -> Result<NodeSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match *spec {
        NodeGenSpec::Equispaced { n, dim } => {
            if n == 0 || dim == 0 {
                return Err(invalid("n", "grid size and dimension must be positive"));
            }
            let total = n
                .checked_pow(dim as u32)
                .ok_or_else(|| invalid("n", "grid too large"))?;
            let mut flat = Vec::with_capacity(total * dim);
            for idx in 0..total {
                let mut rest = idx;
                let mut node = vec![0.0; dim];
                for c in node.iter_mut().rev() {
                    *c = -0.5 + (rest % n) as f64 / n as f64;
                    rest /= n;
                }
                flat.extend(node);
            }
            NodeSet::from_flat(dim, flat)
        }
        NodeGenSpec::Jittered { m, epsilon } => {
            if m == 0 {
                return Err(invalid("m", "need at least one node"));
            }
            if !(0.0..1.0).contains(&epsilon) {
                return Err(invalid("epsilon", format!("must lie in [0, 1), got {epsilon}")));
            }
            let flat = (0..m)
                .map(|j| {
                    let e = if epsilon > 0.0 {
                        rng.random_range(0.0..=epsilon)
                    } else {
                        0.0
                    };
                    -0.5 + (j as f64 - e) / m as f64
                })
                .collect();
            NodeSet::from_flat(1, flat)
        }
        NodeGenSpec::RandomSeparated { m, q, dim } => {
            if m == 0 || dim == 0 {
                return Err(invalid("m", "need at least one node and dimension"));
            }
            if !(q > 0.0 && q <= 0.5) {
                return Err(invalid("q", format!("must lie in (0, 1/2], got {q}")));
            }
            if m as f64 * q.powi(dim as i32) > 1.0 {
                return Err(Error::Infeasible {
                    attempts: 0,
                    placed: 0,
                    requested: m,
                });
            }
            let cap = 10_000 * m;
            let mut flat: Vec<f64> = Vec::with_capacity(m * dim);
            let mut cand = vec![0.0; dim];
            let mut attempts = 0;
            while flat.len() < m * dim {
                if attempts == cap {
                    return Err(Error::Infeasible {
                        attempts,
                        placed: flat.len() / dim,
                        requested: m,
                    });
                }
                attempts += 1;
                for c in cand.iter_mut() {
                    *c = rng.random_range(-0.5..0.5);
                }
                if flat.chunks_exact(dim).all(|x| slice_dist(x, &cand) >= q) {
                    flat.extend_from_slice(&cand);
                }
            }
            NodeSet::from_flat(dim, flat)
        }
        NodeGenSpec::Uniform { m, dim } => {
            if m == 0 || dim == 0 {
                return Err(invalid("m", "need at least one node and dimension"));
            }
            let flat = (0..m * dim).map(|_| rng.random_range(-0.5..0.5)).collect();
            NodeSet::from_flat(dim, flat)
        }
    }
}

/// Upper bound `2^d (2^d - 1) m^(d-1)` on the nodes of a q-separated set in ring `m >= 1`.
pub fn ring_capacity(dim: usize, m: usize) -> f64 {
    let two_d = 2f64.powi(dim as i32);
    two_d * (two_d - 1.0) * (m as f64).powi(dim as i32 - 1)
}
