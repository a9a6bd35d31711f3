//! Scattered sample files and the synthetic level-curve dataset.
//!
//! A sample file holds one sample per line: `d` coordinates followed by the
//! value, separated by whitespace. Lines starting with `#` are skipped.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trigint::geometry::NodeSet;
use trigint::transform::{ndft_forward, SampleVector, SpectralVector};

use crate::config::Normalization;
use crate::error::{CliError, CliResult, Context};

/// Half-width of the box that bounding-box normalisation maps into.
pub const BOX_HALF_WIDTH: f64 = 0.45;

#[derive(Debug, Clone, PartialEq)]
pub struct ScatteredDataset {
    pub nodes: NodeSet,
    pub values: SampleVector,
    pub label: String,
}

impl ScatteredDataset {
    pub fn new(nodes: NodeSet, values: SampleVector, label: impl Into<String>) -> CliResult<Self> {
        if nodes.len() != values.len() {
            return Err(CliError::Config(format!(
                "{} nodes but {} values",
                nodes.len(),
                values.len()
            )));
        }
        Ok(Self {
            nodes,
            values,
            label: label.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.nodes.dim()
    }

    /// Splits off the samples at `holdout` indices; returns `(train, test)`.
    pub fn split(&self, holdout: &[usize]) -> CliResult<(Self, Self)> {
        let mut held = vec![false; self.len()];
        for &j in holdout {
            if j >= self.len() || held[j] {
                return Err(CliError::Config(format!("bad holdout index {j}")));
            }
            held[j] = true;
        }
        let train: Vec<usize> = (0..self.len()).filter(|j| !held[*j]).collect();
        let part = |idx: &[usize], tag: &str| -> CliResult<Self> {
            Ok(Self {
                nodes: self.nodes.subset(idx).at(|| format!("{} {tag}", self.label))?,
                values: self.values.subset(idx),
                label: format!("{}/{tag}", self.label),
            })
        };
        Ok((part(&train, "train")?, part(holdout, "holdout")?))
    }
}

/// Reads a sample file. Only the real part of the values is stored.
pub fn ingest_samples(path: &Path, dim: usize, normalization: Normalization) -> CliResult<ScatteredDataset> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_samples(&text, dim, normalization, &path.display().to_string())
}

pub fn parse_samples(
    text: &str,
    dim: usize,
    normalization: Normalization,
    label: &str,
) -> CliResult<ScatteredDataset> {
    if dim == 0 {
        return Err(CliError::Config("dimension must be at least 1".into()));
    }
    let mut coords = Vec::new();
    let mut values = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != dim + 1 {
            return Err(CliError::Config(format!(
                "{label}: line {}: expected {} fields, found {}",
                idx + 1,
                dim + 1,
                fields.len()
            )));
        }
        for (i, f) in fields.iter().enumerate() {
            let v: f64 = f.parse().ok().filter(|v: &f64| v.is_finite()).ok_or_else(|| {
                CliError::Config(format!("{label}: line {}: not a finite number: {f:?}", idx + 1))
            })?;
            if i < dim {
                coords.push(v);
            } else {
                values.push(v);
            }
        }
    }
    if values.is_empty() {
        return Err(CliError::Config(format!("{label}: no samples")));
    }
    if normalization == Normalization::BoundingBox {
        bounding_box(&mut coords, dim);
    }
    let nodes = NodeSet::from_flat(dim, coords).at(|| label.to_string())?;
    ScatteredDataset::new(nodes, SampleVector::from_real(&values), label)
}

/// Maps each axis affinely onto `[-0.45, 0.45]`; a flat axis goes to 0.
fn bounding_box(coords: &mut [f64], dim: usize) {
    for t in 0..dim {
        let axis = coords.iter().skip(t).step_by(dim);
        let (lo, hi) = axis.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
        let mid = 0.5 * (lo + hi);
        let scale = if hi > lo { 2.0 * BOX_HALF_WIDTH / (hi - lo) } else { 0.0 };
        for v in coords.iter_mut().skip(t).step_by(dim) {
            *v = ((*v - mid) * scale).clamp(-BOX_HALF_WIDTH, BOX_HALF_WIDTH);
        }
    }
}

/// Writes a dataset in the sample file format; reals round-trip exactly.
pub fn write_samples(dataset: &ScatteredDataset, path: &Path) -> CliResult<()> {
    let mut out = format!("# {}\n", dataset.label);
    for (x, y) in dataset.nodes.iter().zip(dataset.values.values()) {
        for c in x {
            out.push_str(&format!("{c} "));
        }
        out.push_str(&format!("{}\n", y.re));
    }
    std::fs::write(path, out).map_err(|e| CliError::io(path, e))
}

/// Degree of the polynomial behind [`synthetic_dataset`].
pub const SYNTHETIC_DEGREE: usize = 64;
const CURVES: usize = 40;
const AMPLITUDE: f64 = 0.04;
const SPECTRAL_WIDTH: f64 = 3.0;

/// Ground-truth coefficients: real-valued, Gaussian-decaying (width 3), degree 64.
pub fn synthetic_truth(seed: u64) -> SpectralVector {
    let n = SYNTHETIC_DEGREE;
    let half = (n / 2) as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5EED_C0EF);
    let mut raw = vec![Complex64::new(0.0, 0.0); n * n];
    for (idx, c) in raw.iter_mut().enumerate() {
        let (k1, k2) = ((idx / n) as i64 - half, (idx % n) as i64 - half);
        let env = (-((k1 * k1 + k2 * k2) as f64) / (2.0 * SPECTRAL_WIDTH * SPECTRAL_WIDTH)).exp();
        *c = env * Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    }
    // f(x) real requires c_{-k} = conj(c_k); the row and column at -N/2 have
    // no partner and are dropped.
    let mut values = vec![Complex64::new(0.0, 0.0); n * n];
    for idx in 0..n * n {
        let (a, b) = (idx / n, idx % n);
        if a == 0 || b == 0 {
            continue;
        }
        let mirror = (n - a) * n + (n - b);
        values[idx] = 0.5 * (raw[idx] + raw[mirror].conj());
    }
    SpectralVector::from_values(2, n, values).expect("shape is fixed")
}

/// `m` samples of [`synthetic_truth`] along 40 parallel wavy curves, mimicking
/// level-line data: dense along each curve, sparse across.
pub fn synthetic_dataset(m: usize, seed: u64) -> CliResult<(ScatteredDataset, SpectralVector)> {
    if m < CURVES {
        return Err(CliError::Config(format!("synthetic dataset needs at least {CURVES} samples")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phase = rng.random_range(0.0..1.0);
    let mut coords = Vec::with_capacity(2 * m);
    for i in 0..CURVES {
        let count = m / CURVES + usize::from(i < m % CURVES);
        let level = -0.5 + (i as f64 + 0.5) / CURVES as f64;
        for j in 0..count {
            let x = -0.5 + (j as f64 + 0.3 * rng.random_range(0.0..1.0)) / count as f64;
            coords.push(x);
            coords.push(level + AMPLITUDE * (2.0 * PI * (x + phase)).sin());
        }
    }
    let nodes = NodeSet::from_flat(2, coords).at(|| "synthetic nodes".into())?;
    let truth = synthetic_truth(seed);
    let mut values = ndft_forward(&truth, &nodes).at(|| "synthetic values".into())?;
    for v in values.values_mut() {
        *v = Complex64::new(v.re, 0.0);
    }
    let data = ScatteredDataset::new(nodes, values, format!("synthetic({m})"))?;
    Ok((data, truth))
}
