use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{check_coeffs, check_samples, FourierOperator, SampleVector, SpectralVector};
use crate::error::{Error, Result};
use crate::geometry::NodeSet;
use crate::grid::{self, check_degree};

/// Exact `O(M N^d)` summation.
#[derive(Debug, Clone)]
pub struct DirectOperator {
    nodes: NodeSet,
    degree: usize,
}

impl DirectOperator {
    pub fn new(nodes: NodeSet, degree: usize) -> Result<Self> {
        check_degree(degree)?;
        grid::grid_len(degree, nodes.dim())?;
        Ok(Self { nodes, degree })
    }

    /// `e^{2 pi i k x_t}` for every axis `t` and `k in I_N`.
    fn phases(&self, j: usize) -> Vec<Vec<Complex64>> {
        let half = (self.degree / 2) as i64;
        self.nodes
            .node(j)
            .iter()
            .map(|x| {
                (-half..half)
                    .map(|k| Complex64::cis(2.0 * PI * k as f64 * x))
                    .collect()
            })
            .collect()
    }
}

/// Contracts the flat coefficient tensor against per-axis phase vectors.
fn contract(values: &[Complex64], phases: &[Vec<Complex64>], degree: usize) -> Complex64 {
    match phases {
        [] => values[0],
        [last] => values.iter().zip(last).map(|(v, p)| v * p).sum(),
        [first, rest @ ..] => {
            let stride = values.len() / degree;
            first
                .iter()
                .enumerate()
                .map(|(i, p)| p * contract(&values[i * stride..(i + 1) * stride], rest, degree))
                .sum()
        }
    }
}

/// Adds `y * outer(phases)` into the flat coefficient tensor.
fn spread(out: &mut [Complex64], phases: &[Vec<Complex64>], y: Complex64, degree: usize) {
    match phases {
        [] => out[0] += y,
        [last] => out.iter_mut().zip(last).for_each(|(o, p)| *o += y * p),
        [first, rest @ ..] => {
            let stride = out.len() / degree;
            for (i, p) in first.iter().enumerate() {
                spread(&mut out[i * stride..(i + 1) * stride], rest, y * p, degree);
            }
        }
    }
}

impl FourierOperator for DirectOperator {
    fn nodes(&self) -> &NodeSet {
        &self.nodes
    }

    fn degree(&self) -> usize {
        self.degree
    }

    fn forward(&self, coeffs: &SpectralVector) -> Result<SampleVector> {
        check_coeffs(self, coeffs)?;
        let values = (0..self.nodes.len())
            .map(|j| contract(coeffs.values(), &self.phases(j), self.degree))
            .collect();
        Ok(SampleVector::new(values))
    }

    fn adjoint(&self, samples: &SampleVector) -> Result<SpectralVector> {
        check_samples(self, samples)?;
        let mut out = SpectralVector::zeros(self.nodes.dim(), self.degree)?;
        for (j, y) in samples.values().iter().enumerate() {
            let conj: Vec<Vec<Complex64>> = self
                .phases(j)
                .into_iter()
                .map(|axis| axis.into_iter().map(|p| p.conj()).collect())
                .collect();
            spread(out.values_mut(), &conj, *y, self.degree);
        }
        Ok(out)
    }
}

/// `(A f)_j = sum_k f_k e^{2 pi i k.x_j}` by direct summation.
pub fn ndft_forward(coeffs: &SpectralVector, nodes: &NodeSet) -> Result<SampleVector> {
    DirectOperator::new(nodes.clone(), coeffs.degree())?.forward(coeffs)
}

/// `(A^H y)_k = sum_j y_j e^{-2 pi i k.x_j}` by direct summation.
pub fn ndft_adjoint(samples: &SampleVector, nodes: &NodeSet, degree: usize) -> Result<SpectralVector> {
    DirectOperator::new(nodes.clone(), degree)?.adjoint(samples)
}

/// The explicit `M x N^d` matrix `A`.
pub fn fourier_matrix(nodes: &NodeSet, degree: usize) -> Result<DMatrix<Complex64>> {
    check_degree(degree)?;
    let cols = grid::grid_len(degree, nodes.dim())?;
    let m = nodes.len();
    if m.saturating_mul(cols) > 1 << 26 {
        return Err(Error::DenseCapExceeded {
            size: m.saturating_mul(cols),
            cap: 1 << 26,
        });
    }
    let mut a = DMatrix::from_element(m, cols, Complex64::new(0.0, 0.0));
    let mut k = vec![0i64; nodes.dim()];
    for (j, x) in nodes.iter().enumerate() {
        for c in 0..cols {
            grid::unflatten(c, degree, &mut k);
            let dot: f64 = k.iter().zip(x).map(|(kt, xt)| *kt as f64 * xt).sum();
            a[(j, c)] = Complex64::cis(2.0 * PI * dot);
        }
    }
    Ok(a)
}
