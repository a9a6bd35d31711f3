//! Trigonometric kernels `K_N(x) = sum_k w_k e^{2 pi i k.x}`, their closed
//! forms and localisation certificates, and dense kernel matrices.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::geometry::{canonicalize, NodeSet, TorusPoint};
use crate::grid;
use crate::transform::{DirectOperator, FourierOperator, SampleVector};
use crate::weights::{
    damping_from_weight, variation_bound, ClosedKernel, DampingFactors, WeightFunctionSpec,
};

/// Largest node count for which a kernel matrix is materialised by default.
pub const DENSE_CAP: usize = 4096;

/// Riemann zeta `sum_{r >= 1} r^(-s)` for real `s > 1`.
///
/// Direct summation of the first terms plus an Euler-Maclaurin tail; the
/// neglected remainder is far below `1e-12` for every `s > 1`.
pub fn zeta(s: f64) -> Result<f64> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(invalid("s", format!("zeta needs s > 1, got {s}")));
    }
    const R: f64 = 64.0;
    let head: f64 = (1..R as u32).map(|r| (r as f64).powf(-s)).sum();
    // f(R)/2 + int_R^inf f + sum_j B_2j / (2j)! * (-f^(2j-1)(R))
    let mut tail = R.powf(1.0 - s) / (s - 1.0) + 0.5 * R.powf(-s);
    const BERNOULLI: [f64; 4] = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0];
    let mut rising = s; // s (s+1) ... (s + 2j - 2)
    let mut fact = 2.0; // (2j)!
    for (j, b) in BERNOULLI.iter().enumerate() {
        let order = 2 * j + 1;
        tail += b / fact * rising * R.powf(-s - order as f64);
        rising *= (s + order as f64) * (s + order as f64 + 1.0);
        fact *= ((order + 2) * (order + 3)) as f64;
    }
    Ok(head + tail)
}

/// `sum_{k in I_N} c_k e^{2 pi i k x}` for univariate coefficients `c`.
#[inline]
pub(crate) fn univariate_sum(coeffs: &[f64], x: f64) -> Complex64 {
    let n = coeffs.len() as f64;
    let step = Complex64::cis(2.0 * PI * x);
    // Reset the rotation from an exact phase every 64 terms.
    let mut acc = Complex64::new(0.0, 0.0);
    let start = -(n / 2.0);
    for (block, chunk) in coeffs.chunks(64).enumerate() {
        let mut phase = Complex64::cis(2.0 * PI * (start + (block * 64) as f64) * x);
        for c in chunk {
            acc += phase * *c;
            phase *= step;
        }
    }
    acc
}

/// Evaluates the kernel of `w` at `x`.
///
/// Tensor-product weights cost `d * N` operations, general weights `d * N^d`.
pub fn kernel_eval(w: &DampingFactors, x: &TorusPoint) -> Result<Complex64> {
    if x.dim() != w.dim() {
        return Err(Error::DimensionMismatch {
            expected: w.dim(),
            found: x.dim(),
        });
    }
    Ok(eval_coords(w, x.coords()))
}

pub(crate) fn eval_coords(w: &DampingFactors, x: &[f64]) -> Complex64 {
    if let Some(factor) = w.tensor_factor() {
        return x.iter().map(|xt| univariate_sum(factor, *xt)).product();
    }
    let n = w.degree();
    let d = w.dim();
    let half = (n / 2) as i64;
    let phases: Vec<Vec<Complex64>> = x
        .iter()
        .map(|xt| {
            (-half..half)
                .map(|k| Complex64::cis(2.0 * PI * k as f64 * xt))
                .collect()
        })
        .collect();
    let mut k = vec![0i64; d];
    let mut acc = Complex64::new(0.0, 0.0);
    for (flat, wk) in w.values().iter().enumerate() {
        grid::unflatten(flat, n, &mut k);
        let mut term = Complex64::new(*wk, 0.0);
        for (t, kt) in k.iter().enumerate() {
            term *= phases[t][(kt + half) as usize];
        }
        acc += term;
    }
    acc
}

/// Ratio `sin(a pi x) / sin(pi x)`, continuous through `x = 0`.
fn sine_quotient(a: f64, x: f64) -> f64 {
    let s = (PI * x).sin();
    if s.abs() < 1e-8 {
        let px = PI * x;
        a * (1.0 - (a * a - 1.0) * px * px / 6.0)
    } else {
        (a * PI * x).sin() / s
    }
}

/// Closed-form univariate kernel values.
pub fn kernel_closed_form(kind: ClosedKernel, degree: usize, x: f64) -> Result<Complex64> {
    kind.check_degree(degree)?;
    if !x.is_finite() {
        return Err(invalid("x", "must be finite"));
    }
    Ok(closed_unchecked(kind, degree, canonicalize(x)))
}

pub(crate) fn closed_unchecked(kind: ClosedKernel, degree: usize, x: f64) -> Complex64 {
    let n = degree as f64;
    match kind {
        ClosedKernel::Dirichlet => {
            Complex64::cis(-PI * x) * (sine_quotient(n, x) / n)
        }
        ClosedKernel::Fejer => {
            let q = sine_quotient(n / 2.0, x);
            (Complex64::new(1.0, 0.0) + Complex64::cis(-2.0 * PI * x)) * (2.0 * q * q / (n * n))
        }
        ClosedKernel::Jackson { order, sigma } => {
            let s = sigma as f64;
            let q = sine_quotient(s, x) / s;
            (Complex64::new(1.0, 0.0) + Complex64::cis(-2.0 * PI * x)) * (0.5 * q.powi(order as i32))
        }
    }
}

/// Localisation certificate `|K_N(x)| <= c_beta / (N ||x||_inf)^beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelDecay {
    pub beta: f64,
    pub c_beta: f64,
    /// Smallest even degree for which the certificate is claimed.
    pub valid_from_n: usize,
    /// `true` when `c_beta` was measured rather than derived.
    pub empirical: bool,
}

/// What a decay certificate is derived from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecaySource {
    /// Damping factors sampled from a B-spline (or hat) weight.
    Weight(WeightFunctionSpec),
    /// A kernel with closed-form coefficients.
    Closed(ClosedKernel),
    /// Measured on a grid at `degree`, then inflated by 10%.
    Empirical {
        spec: WeightFunctionSpec,
        degree: usize,
    },
}

/// Decay constant for sampled weights from the variation of `g^(beta-1)`.
///
/// `(2^b - 1) zeta(b) V / (2^(b-1) (2 pi)^b - zeta(b) b^(-b) V)`.
pub fn generic_decay_constant(beta: u32, variation: f64) -> Result<f64> {
    if beta < 2 {
        return Err(Error::Unsupported("order must be at least 2".into()));
    }
    let b = beta as f64;
    let z = zeta(b)?;
    let denom = 2f64.powf(b - 1.0) * (2.0 * PI).powf(b) - z * b.powf(-b) * variation;
    if !(denom > 0.0) {
        return Err(Error::Unsupported(format!(
            "variation {variation} too large for a decay certificate of order {beta}"
        )));
    }
    Ok((2f64.powf(b) - 1.0) * z * variation / denom)
}

/// Certificate `(beta, c_beta)` for a kernel family.
pub fn decay_profile(source: &DecaySource) -> Result<KernelDecay> {
    match *source {
        DecaySource::Weight(spec) => {
            spec.validate()?;
            match spec {
                WeightFunctionSpec::Hat | WeightFunctionSpec::BSpline { .. } => {
                    let beta = spec.order();
                    if beta < 2 {
                        return Err(Error::Unsupported(
                            "the top-hat weight carries no decay certificate".into(),
                        ));
                    }
                    let b = beta as f64;
                    let z = zeta(b)?;
                    let c_beta = (2f64.powf(b) - 1.0) * z * b.powf(b)
                        / (2f64.powf(b - 1.0) * PI.powf(b) - z);
                    Ok(KernelDecay {
                        beta: b,
                        c_beta,
                        valid_from_n: 2 * beta as usize,
                        empirical: false,
                    })
                }
                WeightFunctionSpec::TopHat => Err(Error::Unsupported(
                    "the top-hat weight carries no decay certificate".into(),
                )),
                WeightFunctionSpec::Sobolev { .. } => {
                    let var = variation_bound(&spec)?;
                    if var.estimated {
                        return Err(Error::Unsupported(
                            "Sobolev weights need an empirical certificate".into(),
                        ));
                    }
                    let c_beta = generic_decay_constant(spec.order(), var.value)?;
                    Ok(KernelDecay {
                        beta: spec.order() as f64,
                        c_beta,
                        valid_from_n: 2 * spec.order() as usize,
                        empirical: false,
                    })
                }
            }
        }
        DecaySource::Closed(kind) => {
            let (beta, c_beta) = match kind {
                ClosedKernel::Dirichlet => (1.0, 1.0),
                ClosedKernel::Fejer => (2.0, 1.0),
                ClosedKernel::Jackson { order, .. } => {
                    if order == 0 || order % 2 != 0 {
                        return Err(invalid("order", "Jackson order must be even"));
                    }
                    let b = order as f64;
                    (b, (b / 2.0).powf(b))
                }
            };
            Ok(KernelDecay {
                beta,
                c_beta,
                valid_from_n: (2.0 * beta) as usize,
                empirical: false,
            })
        }
        DecaySource::Empirical { spec, degree } => {
            let w = damping_from_weight(&spec, degree)?;
            let beta = spec.order() as f64;
            let n = degree as f64;
            let samples = 10_000;
            let worst = (1..=samples)
                .map(|i| {
                    let x = 0.5 * i as f64 / samples as f64;
                    eval_coords(&w, &[x])
                        .norm()
                        .max(eval_coords(&w, &[-x]).norm())
                        * (n * x).powf(beta)
                })
                .fold(0.0, f64::max);
            Ok(KernelDecay {
                beta,
                c_beta: 1.1 * worst,
                valid_from_n: 2 * spec.order() as usize,
                empirical: true,
            })
        }
    }
}

/// The Gram matrix `(K_N(x_j - x_l))_{j,l}`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix {
    entries: DMatrix<Complex64>,
}

impl KernelMatrix {
    /// Wraps a square matrix; the caller vouches for the kernel structure.
    pub fn from_dense(entries: DMatrix<Complex64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(invalid("entries", "kernel matrix must be square"));
        }
        Ok(Self { entries })
    }

    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn into_inner(self) -> DMatrix<Complex64> {
        self.entries
    }

    pub fn get(&self, j: usize, l: usize) -> Complex64 {
        self.entries[(j, l)]
    }
}

fn assemble(
    nodes: &NodeSet,
    cap: usize,
    mut eval: impl FnMut(&[f64]) -> Complex64,
) -> Result<KernelMatrix> {
    let m = nodes.len();
    if m > cap {
        return Err(Error::DenseCapExceeded { size: m, cap });
    }
    let d = nodes.dim();
    let mut entries = DMatrix::from_element(m, m, Complex64::new(0.0, 0.0));
    let mut diff = vec![0.0; d];
    for j in 0..m {
        entries[(j, j)] = Complex64::new(1.0, 0.0);
        let xj = nodes.node(j);
        for l in j + 1..m {
            for ((dt, a), b) in diff.iter_mut().zip(xj).zip(nodes.node(l)) {
                *dt = canonicalize(a - b);
            }
            let v = eval(&diff);
            entries[(j, l)] = v;
            entries[(l, j)] = v.conj();
        }
    }
    Ok(KernelMatrix { entries })
}

/// Dense kernel matrix of the weights `w` at `nodes`, capped at [`DENSE_CAP`].
pub fn kernel_matrix(nodes: &NodeSet, w: &DampingFactors) -> Result<KernelMatrix> {
    kernel_matrix_capped(nodes, w, DENSE_CAP)
}

pub fn kernel_matrix_capped(
    nodes: &NodeSet,
    w: &DampingFactors,
    cap: usize,
) -> Result<KernelMatrix> {
    if nodes.dim() != w.dim() {
        return Err(Error::DimensionMismatch {
            expected: w.dim(),
            found: nodes.dim(),
        });
    }
    assemble(nodes, cap, |x| eval_coords(w, x))
}

/// Dense kernel matrix of the tensor-product closed-form kernel.
///
/// Equal to [`kernel_matrix`] on the matching damping factors, at `O(d)`
/// cost per entry instead of `O(d N)`.
pub fn kernel_matrix_closed(
    nodes: &NodeSet,
    kind: ClosedKernel,
    degree: usize,
) -> Result<KernelMatrix> {
    kind.check_degree(degree)?;
    assemble(nodes, DENSE_CAP, |x| {
        x.iter()
            .map(|xt| closed_unchecked(kind, degree, *xt))
            .product()
    })
}

/// `A W A^H` assembled column by column through the direct transform.
///
/// Slower than [`kernel_matrix`]; it exists to check the factorisation.
pub fn kernel_matrix_via_transform(nodes: &NodeSet, w: &DampingFactors) -> Result<KernelMatrix> {
    let m = nodes.len();
    if m > DENSE_CAP {
        return Err(Error::DenseCapExceeded { size: m, cap: DENSE_CAP });
    }
    let op = DirectOperator::new(nodes.clone(), w.degree())?;
    let mut entries = DMatrix::from_element(m, m, Complex64::new(0.0, 0.0));
    for j in 0..m {
        let mut e = SampleVector::zeros(m);
        e.values_mut()[j] = Complex64::new(1.0, 0.0);
        let mut col = op.adjoint(&e)?;
        for (c, wk) in col.values_mut().iter_mut().zip(w.values()) {
            *c *= wk;
        }
        for (i, v) in op.forward(&col)?.values().iter().enumerate() {
            entries[(i, j)] = *v;
        }
    }
    Ok(KernelMatrix { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{generate_nodes, NodeGenSpec};
    use crate::weights::{damping_closed, tensorize};
    use approx::assert_abs_diff_eq;

    #[test]
    fn zeta_values() {
        assert_abs_diff_eq!(zeta(2.0).unwrap(), PI * PI / 6.0, epsilon = 1e-13);
        assert_abs_diff_eq!(zeta(4.0).unwrap(), PI.powi(4) / 90.0, epsilon = 1e-13);
        let brute: f64 = (1..=10_000_000u64).rev().map(|r| (r as f64).powi(-3)).sum();
        assert_abs_diff_eq!(zeta(3.0).unwrap(), brute, epsilon = 1e-10);
        assert!(zeta(1.0).is_err());
        assert!(zeta(0.5).is_err());
        // Close to the pole the Euler-Maclaurin tail still dominates correctly.
        assert!(zeta(1.01).unwrap() > 100.0);
    }

    #[test]
    fn kernel_eval_examples() {
        let dir = damping_closed(ClosedKernel::Dirichlet, 4).unwrap();
        let v = kernel_eval(&dir, &TorusPoint::new(vec![0.25]).unwrap()).unwrap();
        assert!(v.norm() < 1e-15);
        for w in [
            dir.clone(),
            damping_closed(ClosedKernel::Fejer, 10).unwrap(),
            tensorize(&damping_closed(ClosedKernel::Fejer, 6).unwrap(), 2).unwrap(),
        ] {
            let zero = kernel_eval(&w, &TorusPoint::origin(w.dim())).unwrap();
            assert_abs_diff_eq!(zero.re, 1.0, epsilon = 1e-14);
            assert_abs_diff_eq!(zero.im, 0.0, epsilon = 1e-14);
        }
        assert!(kernel_eval(&dir, &TorusPoint::origin(2)).is_err());
    }

    #[test]
    fn tensor_eval_is_product_and_matches_general_path() {
        let base = damping_closed(ClosedKernel::Fejer, 8).unwrap();
        let t = tensorize(&base, 2).unwrap();
        let general = DampingFactors::from_values(2, 8, t.values().to_vec()).unwrap();
        for (a, b) in [(0.1, -0.3), (0.37, 0.02), (-0.5, 0.25)] {
            let p = TorusPoint::new(vec![a, b]).unwrap();
            let prod = kernel_eval(&base, &TorusPoint::new(vec![a]).unwrap()).unwrap()
                * kernel_eval(&base, &TorusPoint::new(vec![b]).unwrap()).unwrap();
            let tv = kernel_eval(&t, &p).unwrap();
            let gv = kernel_eval(&general, &p).unwrap();
            assert!((tv - prod).norm() < 1e-13);
            assert!((gv - prod).norm() < 1e-13);
        }
    }

    #[test]
    fn closed_forms_match_coefficient_sums() {
        let kinds = [
            (ClosedKernel::Dirichlet, 16),
            (ClosedKernel::Fejer, 16),
            (ClosedKernel::Jackson { order: 4, sigma: 4 }, 14),
            (ClosedKernel::Jackson { order: 6, sigma: 3 }, 14),
        ];
        for (kind, n) in kinds {
            let w = damping_closed(kind, n).unwrap();
            for i in -500..=500 {
                let x = i as f64 / 1000.0;
                let closed = kernel_closed_form(kind, n, x).unwrap();
                let sum = eval_coords(&w, &[x]);
                assert!((closed - sum).norm() < 1e-12, "{kind:?} x={x}: {closed} vs {sum}");
            }
            assert_eq!(kernel_closed_form(kind, n, 0.0).unwrap(), Complex64::new(1.0, 0.0));
        }
        let fej = damping_closed(ClosedKernel::Fejer, 16).unwrap();
        let oracle: Complex64 = (-8..8)
            .map(|k| fej.get(&[k]) * Complex64::cis(2.0 * PI * k as f64 * 0.3))
            .sum();
        assert!((kernel_closed_form(ClosedKernel::Fejer, 16, 0.3).unwrap() - oracle).norm() < 1e-12);
    }

    #[test]
    fn closed_form_near_zero_is_smooth() {
        for n in [4usize, 64, 1000] {
            for x in [1e-12, 3e-9, 1e-7, 1e-6] {
                let closed = kernel_closed_form(ClosedKernel::Fejer, n, x).unwrap();
                let w = damping_closed(ClosedKernel::Fejer, n).unwrap();
                let sum = eval_coords(&w, &[x]);
                assert!((closed - sum).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn fejer_localisation_grid() {
        for n in [4usize, 16, 64] {
            for i in 1..=1000 {
                let x = 0.5 * i as f64 / 1000.0;
                let v = kernel_closed_form(ClosedKernel::Fejer, n, x).unwrap().norm();
                assert!(v <= (n as f64 * x).powi(-2) * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn decay_examples() {
        let b2 = decay_profile(&DecaySource::Weight(WeightFunctionSpec::BSpline { order: 2 }))
            .unwrap();
        assert_abs_diff_eq!(b2.c_beta, 12.0 / 11.0, epsilon = 1e-12);
        assert_eq!(b2.valid_from_n, 4);
        let hat = decay_profile(&DecaySource::Weight(WeightFunctionSpec::Hat)).unwrap();
        assert_eq!(hat, b2);
        let j4 =
            decay_profile(&DecaySource::Closed(ClosedKernel::Jackson { order: 4, sigma: 2 })).unwrap();
        assert_eq!((j4.beta, j4.c_beta), (4.0, 16.0));
        let dir = decay_profile(&DecaySource::Closed(ClosedKernel::Dirichlet)).unwrap();
        assert_eq!((dir.beta, dir.c_beta), (1.0, 1.0));
        assert!(decay_profile(&DecaySource::Weight(WeightFunctionSpec::TopHat)).is_err());
        let sob = WeightFunctionSpec::Sobolev {
            alpha: 0.5,
            order: 3,
            gamma: 1e-3,
        };
        assert!(decay_profile(&DecaySource::Weight(sob)).is_err());
        let emp = decay_profile(&DecaySource::Empirical { spec: sob, degree: 64 }).unwrap();
        assert!(emp.empirical && emp.c_beta > 0.0);
    }

    #[test]
    fn generic_constant_reproduces_spline_formula() {
        for order in 2..=6u32 {
            let spec = WeightFunctionSpec::BSpline { order };
            let v = variation_bound(&spec).unwrap().value;
            let generic = generic_decay_constant(order, v).unwrap();
            let cor = decay_profile(&DecaySource::Weight(spec)).unwrap().c_beta;
            assert_abs_diff_eq!(generic, cor, epsilon = 1e-12 * cor);
        }
    }

    fn max_scaled(w: &DampingFactors, beta: f64) -> f64 {
        let n = w.degree() as f64;
        (1..=4096)
            .map(|i| {
                let x = -0.5 + i as f64 / 4096.0;
                if x == 0.0 {
                    return 0.0;
                }
                eval_coords(w, &[x]).norm() * (n * x.abs()).powf(beta)
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn certificates_hold_on_a_grid() {
        for n in [16usize, 32, 64] {
            for order in 2..=4u32 {
                let spec = WeightFunctionSpec::BSpline { order };
                let cert = decay_profile(&DecaySource::Weight(spec)).unwrap();
                let w = damping_from_weight(&spec, n).unwrap();
                assert!(max_scaled(&w, cert.beta) <= cert.c_beta * (1.0 + 1e-9));
            }
            let fej = damping_closed(ClosedKernel::Fejer, n).unwrap();
            assert!(max_scaled(&fej, 2.0) <= 1.0 + 1e-9);
            let dir = damping_closed(ClosedKernel::Dirichlet, n).unwrap();
            assert!(max_scaled(&dir, 1.0) <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn tensor_certificate_uses_sup_norm() {
        let spec = WeightFunctionSpec::BSpline { order: 3 };
        let cert = decay_profile(&DecaySource::Weight(spec)).unwrap();
        let n = 16usize;
        let w = tensorize(&damping_from_weight(&spec, n).unwrap(), 2).unwrap();
        let steps = 64;
        for i in 0..steps {
            for j in 0..steps {
                let x = [-0.5 + i as f64 / steps as f64, -0.5 + j as f64 / steps as f64];
                let sup = x[0].abs().max(x[1].abs());
                if sup == 0.0 {
                    continue;
                }
                let bound = cert.c_beta / (n as f64 * sup).powf(cert.beta);
                assert!(eval_coords(&w, &x).norm() <= bound * (1.0 + 1e-9));
            }
        }
    }

    #[test]
    fn matrix_factorises_through_the_transform() {
        for (dim, degree) in [(1usize, 32usize), (2, 8)] {
            let nodes = generate_nodes(&NodeGenSpec::Uniform { m: 8, dim }, 21).unwrap();
            let w = tensorize(&damping_closed(ClosedKernel::Fejer, degree).unwrap(), dim).unwrap();
            let direct = kernel_matrix(&nodes, &w).unwrap();
            let factored = kernel_matrix_via_transform(&nodes, &w).unwrap();
            let dev = (direct.entries() - factored.entries()).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(dev <= 1e-10, "{dev}");
        }
    }

    #[test]
    fn matrix_examples() {
        let one = NodeSet::from_flat(1, vec![0.3]).unwrap();
        let w = damping_closed(ClosedKernel::Fejer, 8).unwrap();
        let k = kernel_matrix(&one, &w).unwrap();
        assert_eq!(k.size(), 1);
        assert_eq!(k.get(0, 0), Complex64::new(1.0, 0.0));

        let eq = generate_nodes(&NodeGenSpec::Equispaced { n: 12, dim: 1 }, 0).unwrap();
        let dir = damping_closed(ClosedKernel::Dirichlet, 12).unwrap();
        let k = kernel_matrix(&eq, &dir).unwrap();
        for j in 0..12 {
            for l in 0..12 {
                let expect = if j == l { 1.0 } else { 0.0 };
                assert!((k.get(j, l) - expect).norm() < 1e-14, "{:?}", k.get(j, l));
            }
        }
        let big = generate_nodes(&NodeGenSpec::Uniform { m: 9, dim: 1 }, 0).unwrap();
        assert!(matches!(
            kernel_matrix_capped(&big, &w, 8),
            Err(Error::DenseCapExceeded { size: 9, cap: 8 })
        ));
    }

    #[test]
    fn matrix_is_hermitian_with_unit_diagonal() {
        let nodes = generate_nodes(&NodeGenSpec::Uniform { m: 20, dim: 2 }, 4).unwrap();
        let w = tensorize(&damping_from_weight(&WeightFunctionSpec::BSpline { order: 3 }, 10).unwrap(), 2)
            .unwrap();
        let k = kernel_matrix(&nodes, &w).unwrap();
        for j in 0..20 {
            assert_eq!(k.get(j, j), Complex64::new(1.0, 0.0));
            for l in 0..20 {
                assert_eq!(k.get(j, l), k.get(l, j).conj());
            }
        }
    }

    #[test]
    fn closed_matrix_matches_coefficient_matrix() {
        let nodes = generate_nodes(&NodeGenSpec::Uniform { m: 15, dim: 2 }, 9).unwrap();
        for kind in [ClosedKernel::Dirichlet, ClosedKernel::Fejer] {
            let w = tensorize(&damping_closed(kind, 12).unwrap(), 2).unwrap();
            let a = kernel_matrix(&nodes, &w).unwrap();
            let b = kernel_matrix_closed(&nodes, kind, 12).unwrap();
            let diff = (a.entries() - b.entries()).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(diff < 1e-12);
        }
    }
}
