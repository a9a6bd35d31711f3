use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::{check_coeffs, check_samples, FourierOperator, SampleVector, SpectralVector};
use crate::error::{invalid, Result};
use crate::geometry::NodeSet;
use crate::grid::{self, check_degree};

/// Precomputed Gaussian-window NFFT for one node set and degree.
///
/// Forward: scale by the inverse window transform, inverse FFT on the
/// oversampled grid of length `n`, then sum the truncated window at every
/// node. The adjoint runs the transposed steps in reverse order, so it is the
/// exact adjoint of the approximate forward map.
#[derive(Clone)]
pub struct NfftPlan {
    nodes: NodeSet,
    degree: usize,
    oversampling: f64,
    cutoff: usize,
    epsilon: f64,
    n: usize,
    /// `exp(b (pi k / n)^2)` for `k in I_N`.
    deconv: Vec<f64>,
    /// Per node and axis, the first grid index touched by the window.
    starts: Vec<i64>,
    /// Per node and axis, `2m + 2` window values.
    window: Vec<f64>,
    fft_fwd: Arc<dyn Fft<f64>>,
    fft_inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for NfftPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NfftPlan")
            .field("nodes", &self.nodes.len())
            .field("dim", &self.nodes.dim())
            .field("degree", &self.degree)
            .field("oversampling", &self.oversampling)
            .field("grid_len", &self.n)
            .field("cutoff", &self.cutoff)
            .field("epsilon", &self.epsilon)
            .finish()
    }
}

fn oversampled_len(degree: usize, oversampling: f64) -> usize {
    ((oversampling * degree as f64).ceil() as usize).next_power_of_two()
}

/// Smallest cutoff whose Gaussian truncation estimate
/// `4 d exp(-m pi (1 - 1/(2 sigma - 1)))` stays below `epsilon`.
fn cutoff_for(epsilon: f64, sigma: f64, dim: usize) -> usize {
    let rate = PI * (1.0 - 1.0 / (2.0 * sigma - 1.0));
    let m = ((4.0 * dim as f64 / epsilon).ln() / rate).ceil();
    (m.max(1.0)) as usize
}

impl NfftPlan {
    /// Plan with oversampling 2 and the cutoff derived from `epsilon`.
    pub fn new(nodes: NodeSet, degree: usize, epsilon: f64) -> Result<Self> {
        Self::with_oversampling(nodes, degree, epsilon, 2.0)
    }

    pub fn with_oversampling(
        nodes: NodeSet,
        degree: usize,
        epsilon: f64,
        oversampling: f64,
    ) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(invalid("epsilon", format!("{epsilon} not in (0, 1)")));
        }
        if !(oversampling >= 1.25 && oversampling.is_finite()) {
            return Err(invalid("oversampling", format!("{oversampling} < 1.25")));
        }
        check_degree(degree)?;
        let n = oversampled_len(degree, oversampling);
        let sigma = n as f64 / degree as f64;
        let cutoff = cutoff_for(epsilon, sigma, nodes.dim());
        Self::build(nodes, degree, epsilon, oversampling, cutoff)
    }

    /// Plan with every parameter fixed by the caller.
    pub fn with_params(
        nodes: NodeSet,
        degree: usize,
        oversampling: f64,
        cutoff: usize,
    ) -> Result<Self> {
        if !(oversampling >= 1.25 && oversampling.is_finite()) {
            return Err(invalid("oversampling", format!("{oversampling} < 1.25")));
        }
        if cutoff == 0 {
            return Err(invalid("cutoff", "must be positive"));
        }
        check_degree(degree)?;
        let n = oversampled_len(degree, oversampling);
        let sigma = n as f64 / degree as f64;
        let rate = PI * (1.0 - 1.0 / (2.0 * sigma - 1.0));
        let epsilon = 4.0 * nodes.dim() as f64 * (-(cutoff as f64) * rate).exp();
        Self::build(nodes, degree, epsilon, oversampling, cutoff)
    }

    fn build(
        nodes: NodeSet,
        degree: usize,
        epsilon: f64,
        oversampling: f64,
        cutoff: usize,
    ) -> Result<Self> {
        let dim = nodes.dim();
        let n = oversampled_len(degree, oversampling);
        grid::grid_len(n, dim)?;
        let sigma = n as f64 / degree as f64;
        let b = 2.0 * sigma * cutoff as f64 / ((2.0 * sigma - 1.0) * PI);
        let half = (degree / 2) as i64;
        let deconv = (-half..half)
            .map(|k| (b * (PI * k as f64 / n as f64).powi(2)).exp())
            .collect();

        let width = 2 * cutoff + 2;
        let norm = (PI * b).sqrt().recip();
        let mut starts = Vec::with_capacity(nodes.len() * dim);
        let mut window = Vec::with_capacity(nodes.len() * dim * width);
        for &x in nodes.as_flat() {
            let nx = n as f64 * x;
            let start = nx.floor() as i64 - cutoff as i64;
            starts.push(start);
            for l in start..start + width as i64 {
                let u = nx - l as f64;
                window.push(norm * (-u * u / b).exp());
            }
        }

        let mut planner = FftPlanner::new();
        let fft_fwd = planner.plan_fft_forward(n);
        let fft_inv = planner.plan_fft_inverse(n);
        log::debug!("nfft plan: N={degree} n={n} m={cutoff} d={dim} M={}", nodes.len());
        Ok(Self {
            nodes,
            degree,
            oversampling,
            cutoff,
            epsilon,
            n,
            deconv,
            starts,
            window,
            fft_fwd,
            fft_inv,
        })
    }

    pub fn oversampling(&self) -> f64 {
        self.oversampling
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Length `n` of the oversampled grid along each axis.
    pub fn grid_len(&self) -> usize {
        self.n
    }

    fn width(&self) -> usize {
        2 * self.cutoff + 2
    }

    /// Oversampled-grid position of every `k in I_N^d` and its deconvolution factor.
    fn spectral_map(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        let dim = self.nodes.dim();
        let n = self.n as i64;
        let half = (self.degree / 2) as i64;
        let len = self.degree.pow(dim as u32);
        let mut k = vec![0i64; dim];
        (0..len).map(move |flat| {
            grid::unflatten(flat, self.degree, &mut k);
            let mut pos = 0usize;
            let mut scale = 1.0;
            for &kt in &k {
                pos = pos * self.n + kt.rem_euclid(n) as usize;
                scale *= self.deconv[(kt + half) as usize];
            }
            (pos, scale)
        })
    }

    /// Visits the `(2m + 2)^d` grid cells near node `j` with their window weight.
    fn for_each_cell(&self, j: usize, mut visit: impl FnMut(usize, f64)) {
        let dim = self.nodes.dim();
        let width = self.width();
        let n = self.n as i64;
        let starts = &self.starts[j * dim..(j + 1) * dim];
        let window = &self.window[j * dim * width..(j + 1) * dim * width];
        let mut offs = vec![0usize; dim];
        loop {
            let mut pos = 0usize;
            let mut w = 1.0;
            for t in 0..dim {
                pos = pos * self.n + (starts[t] + offs[t] as i64).rem_euclid(n) as usize;
                w *= window[t * width + offs[t]];
            }
            visit(pos, w);
            let mut t = dim;
            loop {
                if t == 0 {
                    return;
                }
                t -= 1;
                offs[t] += 1;
                if offs[t] < width {
                    break;
                }
                offs[t] = 0;
            }
        }
    }

    fn fft_nd(&self, buf: &mut [Complex64], inverse: bool) {
        let fft = if inverse { &self.fft_inv } else { &self.fft_fwd };
        let dim = self.nodes.dim();
        let n = self.n;
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        for t in 0..dim {
            let stride = n.pow((dim - 1 - t) as u32);
            let block = stride * n;
            for base in (0..buf.len()).step_by(block) {
                for inner in 0..stride {
                    let first = base + inner;
                    if stride == 1 {
                        fft.process_with_scratch(&mut buf[first..first + n], &mut scratch);
                        continue;
                    }
                    for (i, v) in line.iter_mut().enumerate() {
                        *v = buf[first + i * stride];
                    }
                    fft.process_with_scratch(&mut line, &mut scratch);
                    for (i, v) in line.iter().enumerate() {
                        buf[first + i * stride] = *v;
                    }
                }
            }
        }
    }
}

impl FourierOperator for NfftPlan {
    fn nodes(&self) -> &NodeSet {
        &self.nodes
    }

    fn degree(&self) -> usize {
        self.degree
    }

    fn forward(&self, coeffs: &SpectralVector) -> Result<SampleVector> {
        check_coeffs(self, coeffs)?;
        let mut g = vec![Complex64::new(0.0, 0.0); self.n.pow(self.nodes.dim() as u32)];
        for ((pos, scale), f) in self.spectral_map().zip(coeffs.values()) {
            g[pos] = f * scale;
        }
        self.fft_nd(&mut g, true);
        let values = (0..self.nodes.len())
            .map(|j| {
                let mut acc = Complex64::new(0.0, 0.0);
                self.for_each_cell(j, |pos, w| acc += g[pos] * w);
                acc
            })
            .collect();
        Ok(SampleVector::new(values))
    }

    fn adjoint(&self, samples: &SampleVector) -> Result<SpectralVector> {
        check_samples(self, samples)?;
        let mut g = vec![Complex64::new(0.0, 0.0); self.n.pow(self.nodes.dim() as u32)];
        for (j, y) in samples.values().iter().enumerate() {
            self.for_each_cell(j, |pos, w| g[pos] += y * w);
        }
        self.fft_nd(&mut g, false);
        let values = self.spectral_map().map(|(pos, scale)| g[pos] * scale).collect();
        SpectralVector::from_values(self.nodes.dim(), self.degree, values)
    }
}

/// `A f` to accuracy `plan.epsilon() * |f|_1`.
pub fn nfft_forward(plan: &NfftPlan, coeffs: &SpectralVector) -> Result<SampleVector> {
    plan.forward(coeffs)
}

/// `A^H y` to accuracy `plan.epsilon() * |y|_1`.
pub fn nfft_adjoint(plan: &NfftPlan, samples: &SampleVector) -> Result<SpectralVector> {
    plan.adjoint(samples)
}
