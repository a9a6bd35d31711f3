//! The nonequispaced Fourier matrix `A = (e^{2 pi i k.x_j})_{j, k}` as an operator.
//!
//! [`DirectOperator`] sums exactly; [`NfftPlan`] approximates both products
//! with a Gaussian-window gridding scheme to a prescribed accuracy.

mod direct;
mod nfft;

pub use direct::{fourier_matrix, ndft_adjoint, ndft_forward, DirectOperator};
pub use nfft::{nfft_adjoint, nfft_forward, NfftPlan};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::NodeSet;
use crate::grid::{self, check_degree};

/// Coefficients `f_k` over `I_N^d`, flat in [`grid`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralVector {
    dim: usize,
    degree: usize,
    values: Vec<Complex64>,
}

impl SpectralVector {
    pub fn zeros(dim: usize, degree: usize) -> Result<Self> {
        check_degree(degree)?;
        let len = grid::grid_len(degree, dim)?;
        Ok(Self {
            dim,
            degree,
            values: vec![Complex64::new(0.0, 0.0); len],
        })
    }

    pub fn from_values(dim: usize, degree: usize, values: Vec<Complex64>) -> Result<Self> {
        check_degree(degree)?;
        let len = grid::grid_len(degree, dim)?;
        if values.len() != len {
            return Err(Error::LengthMismatch {
                expected: len,
                found: values.len(),
            });
        }
        Ok(Self {
            dim,
            degree,
            values,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `f_k`, or zero outside `I_N^d`.
    pub fn get(&self, k: &[i64]) -> Complex64 {
        grid::flatten(k, self.degree).map_or(Complex64::new(0.0, 0.0), |i| self.values[i])
    }

    pub fn norm_l1(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).sum()
    }

    pub fn norm_l2(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub(crate) fn same_shape(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim || self.degree != other.degree {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(())
    }
}

/// Values `y_j`, one per node.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleVector {
    values: Vec<Complex64>,
}

impl SampleVector {
    pub fn new(values: Vec<Complex64>) -> Self {
        Self { values }
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            values: vec![Complex64::new(0.0, 0.0); len],
        }
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self {
            values: values.iter().map(|v| Complex64::new(*v, 0.0)).collect(),
        }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn norm_l1(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).sum()
    }

    pub fn norm_l2(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Entries at the given positions, in that order.
    pub fn subset(&self, indices: &[usize]) -> Self {
        Self {
            values: indices.iter().map(|&i| self.values[i]).collect(),
        }
    }
}

/// Forward and adjoint products with the nonequispaced Fourier matrix.
pub trait FourierOperator {
    fn nodes(&self) -> &NodeSet;
    fn degree(&self) -> usize;
    /// `A f`.
    fn forward(&self, coeffs: &SpectralVector) -> Result<SampleVector>;
    /// `A^H y`.
    fn adjoint(&self, samples: &SampleVector) -> Result<SpectralVector>;
}

/// How the solvers apply `A` and `A^H`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TransformMode {
    Direct,
    /// Gaussian-window NFFT with target accuracy `epsilon`.
    Fast { epsilon: f64 },
    /// Direct when `M * N^d <= 2^22`, otherwise fast with `epsilon = 1e-12`.
    Auto,
}

impl TransformMode {
    /// The concrete mode picked for a problem size.
    pub fn resolve(self, nodes: usize, degree: usize, dim: usize) -> TransformMode {
        match self {
            TransformMode::Auto => {
                let work = degree
                    .checked_pow(dim as u32)
                    .and_then(|c| c.checked_mul(nodes));
                match work {
                    Some(w) if w <= 1 << 22 => TransformMode::Direct,
                    _ => TransformMode::Fast { epsilon: 1e-12 },
                }
            }
            other => other,
        }
    }
}

/// Builds the operator selected by `mode`.
pub fn build_operator(
    nodes: &NodeSet,
    degree: usize,
    mode: TransformMode,
) -> Result<Box<dyn FourierOperator + Send + Sync>> {
    match mode.resolve(nodes.len(), degree, nodes.dim()) {
        TransformMode::Direct => Ok(Box::new(DirectOperator::new(nodes.clone(), degree)?)),
        TransformMode::Fast { epsilon } => {
            Ok(Box::new(NfftPlan::new(nodes.clone(), degree, epsilon)?))
        }
        TransformMode::Auto => unreachable!("resolved above"),
    }
}

pub(crate) fn check_coeffs(op: &dyn FourierOperator, coeffs: &SpectralVector) -> Result<()> {
    if coeffs.dim() != op.nodes().dim() {
        return Err(Error::DimensionMismatch {
            expected: op.nodes().dim(),
            found: coeffs.dim(),
        });
    }
    if coeffs.degree() != op.degree() {
        return Err(Error::PlanMismatch(format!(
            "operator degree {} but coefficients of degree {}",
            op.degree(),
            coeffs.degree()
        )));
    }
    Ok(())
}

pub(crate) fn check_samples(op: &dyn FourierOperator, samples: &SampleVector) -> Result<()> {
    if samples.len() != op.nodes().len() {
        return Err(Error::LengthMismatch {
            expected: op.nodes().len(),
            found: samples.len(),
        });
    }
    Ok(())
}

/// `sum_i conj(a_i) b_i`.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}
