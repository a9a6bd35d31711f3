//! Brackets `[lambda, Lambda]` for the extremal eigenvalues of kernel matrices.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::grid;
use crate::kernels::{zeta, KernelDecay, KernelMatrix};
use crate::weights::{ClosedKernel, DampingFactors};

/// Where a bracket comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    /// Separated nodes, `d = 1`.
    ThmUnivariate,
    /// Separated nodes, any `d`.
    ThmMultivariate,
    /// Jittered equispaced nodes.
    CorJitter,
    /// B-spline kernel of order `d + 1` on separated nodes.
    CorSpline,
    /// Exact equispaced spectrum from the aliasing sums.
    ThmEquispaced,
    /// Closed equispaced brackets for the Dirichlet and Fejér kernels.
    CorDirichletFejer,
    GershgorinMatrix,
    DenseOracle,
}

impl Provenance {
    pub fn label(&self) -> &'static str {
        match self {
            Provenance::ThmUnivariate => "thm-univariate",
            Provenance::ThmMultivariate => "thm-multivariate",
            Provenance::CorJitter => "cor-jitter",
            Provenance::CorSpline => "cor-spline",
            Provenance::ThmEquispaced => "thm-equispaced",
            Provenance::CorDirichletFejer => "cor-dirichlet-fejer",
            Provenance::GershgorinMatrix => "gershgorin-matrix",
            Provenance::DenseOracle => "dense-oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenBounds {
    pub lower: f64,
    pub upper: f64,
    /// `lower` and `upper` are the attained extremal eigenvalues.
    pub exact: bool,
    pub provenance: Provenance,
    /// `lower > 0`, i.e. the bracket proves the matrix regular.
    pub certifying: bool,
}

impl EigenBounds {
    fn new(lower: f64, upper: f64, exact: bool, provenance: Provenance) -> Self {
        Self {
            lower,
            upper,
            exact,
            provenance,
            certifying: lower > 0.0,
        }
    }

    fn symmetric(radius: f64, provenance: Provenance) -> Self {
        Self::new(1.0 - radius, 1.0 + radius, false, provenance)
    }

    /// `upper / lower`, or `None` without a positivity certificate.
    pub fn cond(&self) -> Option<f64> {
        self.certifying.then(|| self.upper / self.lower)
    }

    /// Whether `[lower, upper]` of `other` lies inside this bracket, up to `tol`.
    pub fn contains(&self, other: &EigenBounds, tol: f64) -> bool {
        self.lower <= other.lower + tol && other.upper <= self.upper + tol
    }
}

fn check_degree_q(degree: usize, q: f64) -> Result<()> {
    grid::check_degree(degree)?;
    if !(q > 0.0 && q <= 0.5) {
        return Err(invalid("q", format!("{q} not in (0, 1/2]")));
    }
    Ok(())
}

/// `1 +- 2^d (2^d - 1) zeta(beta - d + 1) C_beta / (N q)^beta`.
///
/// For `d = 1` the prefactor is 2, the univariate statement. The lower edge
/// may be non-positive; then `certifying` is false.
pub fn separated_bounds(dim: usize, decay: &KernelDecay, degree: usize, q: f64) -> Result<EigenBounds> {
    check_degree_q(degree, q)?;
    if dim == 0 {
        return Err(invalid("dim", "must be at least 1"));
    }
    let d = dim as f64;
    if !(decay.beta > d) {
        return Err(Error::Hypothesis(format!(
            "decay order {} must exceed the dimension {dim}",
            decay.beta
        )));
    }
    if degree < decay.valid_from_n {
        return Err(Error::Hypothesis(format!(
            "decay certificate holds from N = {}, got {degree}",
            decay.valid_from_n
        )));
    }
    let pow = 2f64.powi(dim as i32);
    let radius = pow * (pow - 1.0) * zeta(decay.beta - d + 1.0)? * decay.c_beta
        / (degree as f64 * q).powf(decay.beta);
    let provenance = if dim == 1 {
        Provenance::ThmUnivariate
    } else {
        Provenance::ThmMultivariate
    };
    Ok(EigenBounds::symmetric(radius, provenance))
}

/// Univariate bracket for `M` nodes jittered by at most `epsilon / (2M)` around
/// the equispaced grid: the separated bracket at `q = (1 - epsilon) / M`.
pub fn jitter_bounds(decay: &KernelDecay, degree: usize, m: usize, epsilon: f64) -> Result<EigenBounds> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(invalid("epsilon", format!("{epsilon} not in [0, 1)")));
    }
    if m < 2 {
        return Err(Error::TooFewNodes { required: 2, found: m });
    }
    let mut b = separated_bounds(1, decay, degree, (1.0 - epsilon) / m as f64)?;
    b.provenance = Provenance::CorJitter;
    Ok(b)
}

/// `1 +- (2d / (N q))^(d+1)` for the B-spline kernel of order `d + 1`, valid
/// for `N > 2d / q`.
pub fn spline_qsep_bounds(dim: usize, degree: usize, q: f64) -> Result<EigenBounds> {
    check_degree_q(degree, q)?;
    if dim == 0 {
        return Err(invalid("dim", "must be at least 1"));
    }
    let ratio = 2.0 * dim as f64 / (degree as f64 * q);
    if !(ratio < 1.0) {
        return Err(Error::Hypothesis(format!(
            "certificate needs N > 2d/q = {:.6}, got {degree}",
            2.0 * dim as f64 / q
        )));
    }
    Ok(EigenBounds::symmetric(ratio.powi(dim as i32 + 1), Provenance::CorSpline))
}

/// `n` times the aliasing sums `sum_r w_{s + n r}` of a univariate factor.
fn folded(factor: &[f64], n: usize) -> Vec<f64> {
    let degree = factor.len() as i64;
    let mut out = vec![0.0; n];
    for (i, w) in factor.iter().enumerate() {
        let k = i as i64 - degree / 2;
        out[k.rem_euclid(n as i64) as usize] += w;
    }
    out.iter_mut().for_each(|v| *v *= n as f64);
    out
}

/// Spectrum of the kernel matrix at the grid `{-1/2 + j/n}^d`, ascending.
///
/// `lambda_s = n^d sum_r w_{s + n r}`; tensor weights use the product of the
/// univariate sums.
pub fn equispaced_eigenvalues(w: &DampingFactors, n: usize, dim: usize) -> Result<Vec<f64>> {
    if dim != w.dim() {
        return Err(Error::DimensionMismatch {
            expected: w.dim(),
            found: dim,
        });
    }
    if n == 0 {
        return Err(invalid("n", "grid size must be positive"));
    }
    let total = grid::grid_len(n, dim)?;
    let mut eig = match w.tensor_factor() {
        Some(factor) => {
            let axis = folded(factor, n);
            let mut out = vec![1.0; total];
            for (flat, v) in out.iter_mut().enumerate() {
                let mut rest = flat;
                for _ in 0..dim {
                    *v *= axis[rest % n];
                    rest /= n;
                }
            }
            out
        }
        None => {
            let mut out = vec![0.0; total];
            let mut k = vec![0i64; dim];
            for (flat, wk) in w.values().iter().enumerate() {
                grid::unflatten(flat, w.degree(), &mut k);
                let s = k
                    .iter()
                    .fold(0usize, |acc, kt| acc * n + kt.rem_euclid(n as i64) as usize);
                out[s] += wk;
            }
            let scale = total as f64;
            out.iter_mut().for_each(|v| *v *= scale);
            out
        }
    };
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

/// Exact extremal eigenvalues at the equispaced grid with `n^d` nodes.
pub fn equispaced_bounds(w: &DampingFactors, n: usize, dim: usize) -> Result<EigenBounds> {
    let eig = equispaced_eigenvalues(w, n, dim)?;
    Ok(EigenBounds::new(eig[0], eig[eig.len() - 1], true, Provenance::ThmEquispaced))
}

/// Closed equispaced brackets at `M = n^d` nodes (`q = 1/n`).
///
/// Dirichlet: `((floor(N/n) n/N)^d, (ceil(N/n) n/N)^d)`, exact.
/// Fejér: `(1 -+ (n/N)^2)^d`, an enclosure.
pub fn equispaced_closed_bounds(
    kind: ClosedKernel,
    degree: usize,
    n: usize,
    dim: usize,
) -> Result<EigenBounds> {
    kind.check_degree(degree)?;
    if n == 0 || dim == 0 {
        return Err(invalid("n", "grid size and dimension must be positive"));
    }
    if degree < n {
        return Err(Error::Singular(format!(
            "N = {degree} < n = {n}: the equispaced kernel matrix has a zero eigenvalue"
        )));
    }
    let nq = degree as f64 / n as f64;
    let di = dim as i32;
    match kind {
        ClosedKernel::Dirichlet => {
            let lo = (degree / n) as f64 / nq;
            let hi = degree.div_ceil(n) as f64 / nq;
            Ok(EigenBounds::new(lo.powi(di), hi.powi(di), true, Provenance::CorDirichletFejer))
        }
        ClosedKernel::Fejer => {
            let r = nq.powi(-2);
            Ok(EigenBounds::new(
                (1.0 - r).powi(di),
                (1.0 + r).powi(di),
                false,
                Provenance::CorDirichletFejer,
            ))
        }
        ClosedKernel::Jackson { .. } => Err(Error::Unsupported(
            "closed equispaced brackets exist for Dirichlet and Fejér only".into(),
        )),
    }
}

/// `[min_j (K_jj - R_j), max_j (K_jj + R_j)]` with `R_j = sum_{l != j} |K_jl|`.
pub fn gershgorin_bounds(k: &KernelMatrix) -> EigenBounds {
    let e = k.entries();
    let m = k.size();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for j in 0..m {
        let radius: f64 = (0..m).filter(|&l| l != j).map(|l| e[(j, l)].norm()).sum();
        let c = e[(j, j)].re;
        lo = lo.min(c - radius);
        hi = hi.max(c + radius);
    }
    EigenBounds::new(lo, hi, false, Provenance::GershgorinMatrix)
}

/// Matrices up to this size are fully diagonalised.
pub const FULL_EIGEN_CAP: usize = 512;

/// Every eigenvalue of a Hermitian matrix, ascending.
pub fn dense_spectrum(k: &KernelMatrix) -> Result<Vec<f64>> {
    dense_spectrum_of(k.entries())
}

pub(crate) fn dense_spectrum_of(k: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    let m = k.nrows();
    if m > 2 * FULL_EIGEN_CAP {
        return Err(Error::DenseCapExceeded {
            size: m,
            cap: 2 * FULL_EIGEN_CAP,
        });
    }
    let eig = SymmetricEigen::try_new(k.clone(), 1e-15, 0)
        .ok_or_else(|| Error::Numerical("Hermitian eigensolver did not converge".into()))?;
    let mut out: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Extremal eigenvalues: full diagonalisation up to [`FULL_EIGEN_CAP`], two-sided
/// power iteration above.
pub fn dense_extremal_eigs(k: &KernelMatrix) -> Result<EigenBounds> {
    let m = k.size();
    if m <= FULL_EIGEN_CAP {
        let spec = dense_spectrum(k)?;
        return Ok(EigenBounds::new(spec[0], spec[m - 1], true, Provenance::DenseOracle));
    }
    let e = k.entries();
    let (hi, ok_hi) = power_iteration(e, 0.0)?;
    // The spectrum of K lies in [0, hi], so hi - K is PSD with top eigenvalue hi - lambda.
    let (top, ok_lo) = power_iteration(e, hi)?;
    let lo = hi - top;
    if !(ok_hi && ok_lo) {
        log::warn!("power iteration did not reach 1e-10 on a {m}x{m} kernel matrix");
    }
    Ok(EigenBounds::new(lo, hi, ok_hi && ok_lo, Provenance::DenseOracle))
}

/// Largest eigenvalue of `shift I - K` (or of `K` when `shift = 0`).
fn power_iteration(k: &DMatrix<Complex64>, shift: f64) -> Result<(f64, bool)> {
    let m = k.nrows();
    let apply = |v: &DVector<Complex64>| -> DVector<Complex64> {
        let kv = k * v;
        if shift == 0.0 {
            kv
        } else {
            v * Complex64::new(shift, 0.0) - kv
        }
    };
    // Deterministic start with components in every direction.
    let mut v = DVector::from_fn(m, |i, _| Complex64::new(1.0 + (i as f64 * 0.7).sin() * 0.5, (i as f64 * 1.3).cos() * 0.25));
    v /= Complex64::new(v.norm(), 0.0);
    let mut rho = 0.0;
    for _ in 0..20_000 {
        let w = apply(&v);
        let next = v.dotc(&w).re;
        let wn = w.norm();
        if wn == 0.0 {
            return Ok((0.0, true));
        }
        v = w / Complex64::new(wn, 0.0);
        if (next - rho).abs() <= 1e-13 * next.abs().max(1.0) {
            // Residual check: ||A v - rho v|| bounds the eigenvalue error for Hermitian A.
            let r = (apply(&v) - &v * Complex64::new(next, 0.0)).norm();
            if r <= 1e-10 {
                return Ok((next, true));
            }
        }
        rho = next;
    }
    Ok((rho, false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{generate_nodes, NodeGenSpec};
    use crate::kernels::{decay_profile, kernel_matrix, kernel_matrix_closed, DecaySource};
    use crate::weights::{damping_closed, damping_from_weight, tensorize, WeightFunctionSpec};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn fejer_decay() -> KernelDecay {
        decay_profile(&DecaySource::Closed(ClosedKernel::Fejer)).unwrap()
    }

    #[test]
    fn separated_examples() {
        let b = separated_bounds(1, &fejer_decay(), 100, 0.1).unwrap();
        let r = 2.0 * PI * PI / 6.0 / 100.0;
        assert_abs_diff_eq!(b.lower, 1.0 - r, epsilon = 1e-13);
        assert_abs_diff_eq!(b.upper, 1.0 + r, epsilon = 1e-13);
        assert_abs_diff_eq!(r, 0.0328987, epsilon = 1e-7);
        assert_eq!(b.provenance, Provenance::ThmUnivariate);
        assert!(b.certifying);
        let low = separated_bounds(1, &fejer_decay(), 8, 0.1).unwrap();
        assert!(!low.certifying && low.cond().is_none());
        let dir = decay_profile(&DecaySource::Closed(ClosedKernel::Dirichlet)).unwrap();
        assert!(matches!(separated_bounds(1, &dir, 100, 0.1), Err(Error::Hypothesis(_))));
        assert!(matches!(separated_bounds(2, &fejer_decay(), 100, 0.1), Err(Error::Hypothesis(_))));
        assert!(separated_bounds(1, &fejer_decay(), 100, 0.6).is_err());
    }

    #[test]
    fn general_formula_reduces_to_univariate() {
        for beta in [2.0, 3.0, 4.5] {
            for (n, q) in [(32, 0.1), (64, 0.03), (200, 0.5)] {
                let decay = KernelDecay {
                    beta,
                    c_beta: 1.7,
                    valid_from_n: 2,
                    empirical: false,
                };
                let b = separated_bounds(1, &decay, n, q).unwrap();
                let r = 2.0 * zeta(beta).unwrap() * 1.7 / (n as f64 * q).powf(beta);
                assert_abs_diff_eq!(b.upper - 1.0, r, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn jitter_examples() {
        let d = fejer_decay();
        let j = jitter_bounds(&d, 60, 10, 0.0).unwrap();
        let s = separated_bounds(1, &d, 60, 0.1).unwrap();
        assert_abs_diff_eq!(j.lower, s.lower, epsilon = 1e-15);
        assert_eq!(j.provenance, Provenance::CorJitter);
        let j = jitter_bounds(&d, 60, 10, 0.1).unwrap();
        assert_abs_diff_eq!(j.upper - 1.0, 2.0 * PI * PI / 6.0 / (36.0 * 0.81), epsilon = 1e-14);
        assert_abs_diff_eq!(j.upper - 1.0, 0.11282, epsilon = 1e-5);
        assert!(jitter_bounds(&d, 60, 10, 1.0).is_err());
    }

    #[test]
    fn spline_examples() {
        let b = spline_qsep_bounds(1, 16, 0.25).unwrap();
        assert_abs_diff_eq!(b.lower, 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(b.upper, 1.25, epsilon = 1e-15);
        let b = spline_qsep_bounds(2, 32, 0.25).unwrap();
        assert_abs_diff_eq!(b.lower, 0.875, epsilon = 1e-15);
        assert_abs_diff_eq!(b.upper, 1.125, epsilon = 1e-15);
        assert!(matches!(spline_qsep_bounds(1, 8, 0.25), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn equispaced_examples() {
        let dir = damping_closed(ClosedKernel::Dirichlet, 8).unwrap();
        let e = equispaced_eigenvalues(&dir, 8, 1).unwrap();
        assert!(e.iter().all(|v| (v - 1.0).abs() < 1e-14));
        let dir6 = damping_closed(ClosedKernel::Dirichlet, 6).unwrap();
        let e = equispaced_eigenvalues(&dir6, 4, 1).unwrap();
        // Residues of {-3..2} mod 4 occur 1, 2, 2, 1 times.
        let expect = [2.0 / 3.0, 2.0 / 3.0, 4.0 / 3.0, 4.0 / 3.0];
        for (a, b) in e.iter().zip(expect) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(e.iter().sum::<f64>(), 4.0, epsilon = 1e-13);
        let closed = equispaced_closed_bounds(ClosedKernel::Dirichlet, 6, 4, 1).unwrap();
        assert_abs_diff_eq!(closed.lower, 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(closed.upper, 4.0 / 3.0, epsilon = 1e-15);
        assert!(closed.exact);
        let b = equispaced_bounds(&dir6, 4, 1).unwrap();
        assert_eq!((b.lower, b.upper), (e[0], e[3]));
        assert_eq!(b.provenance, Provenance::ThmEquispaced);
        let one = equispaced_closed_bounds(ClosedKernel::Dirichlet, 12, 4, 2).unwrap();
        assert_eq!((one.lower, one.upper), (1.0, 1.0));
        assert!(matches!(
            equispaced_closed_bounds(ClosedKernel::Dirichlet, 4, 6, 1),
            Err(Error::Singular(_))
        ));
    }

    fn circulant_spectrum(w: &DampingFactors, n: usize, dim: usize) -> Vec<f64> {
        let nodes = generate_nodes(&NodeGenSpec::Equispaced { n, dim }, 0).unwrap();
        dense_spectrum(&kernel_matrix(&nodes, w).unwrap()).unwrap()
    }

    #[test]
    fn aliasing_spectrum_matches_dense_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..12 {
            let dim = 1 + trial % 2;
            let degree = 2 * rng.random_range(1..=5usize);
            let n = rng.random_range(2..=if dim == 1 { 12 } else { 6 });
            let len = degree.pow(dim as u32);
            let w = if trial % 3 == 0 {
                let base: Vec<f64> = (0..degree).map(|_| rng.random_range(0.1..1.0)).collect();
                tensorize(&DampingFactors::normalised(1, degree, base).unwrap(), dim).unwrap()
            } else {
                let v: Vec<f64> = (0..len).map(|_| rng.random_range(0.1..1.0)).collect();
                DampingFactors::normalised(dim, degree, v).unwrap()
            };
            let fast = equispaced_eigenvalues(&w, n, dim).unwrap();
            let dense = circulant_spectrum(&w, n, dim);
            for (a, b) in fast.iter().zip(&dense) {
                assert_abs_diff_eq!(*a, *b, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn singular_below_the_grid_size() {
        for (degree, n) in [(4usize, 6usize), (6, 8), (2, 5)] {
            let w = damping_closed(ClosedKernel::Fejer, degree).unwrap();
            let e = equispaced_eigenvalues(&w, n, 1).unwrap();
            assert_eq!(e[0], 0.0);
            assert!(circulant_spectrum(&w, n, 1)[0].abs() < 1e-12);
        }
    }

    #[test]
    fn fejer_closed_bracket_encloses_the_spectrum() {
        for n in [2usize, 3, 4, 5, 6, 8] {
            for degree in (2..=40).step_by(2).filter(|&d| d >= n) {
                let w = damping_closed(ClosedKernel::Fejer, degree).unwrap();
                let e = equispaced_eigenvalues(&w, n, 1).unwrap();
                let b = equispaced_closed_bounds(ClosedKernel::Fejer, degree, n, 1).unwrap();
                assert!(b.lower <= e[0] + 1e-14 && e[n - 1] <= b.upper + 1e-14, "N={degree} n={n}");
            }
        }
    }

    #[test]
    fn fejer_spectrum_at_odd_multiples() {
        // N = (2s+1) n: the half-shift phase of the Fejér kernel makes the
        // aliasing sums 1 +- (1 - 2/n) / (N/n)^2 rather than 1 +- (n/N)^2.
        let w = damping_closed(ClosedKernel::Fejer, 6).unwrap();
        let e = equispaced_eigenvalues(&w, 2, 1).unwrap();
        assert_abs_diff_eq!(e[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e[1], 1.0, epsilon = 1e-14);
        for n in [4usize, 6] {
            for s in 1..=5usize {
                let degree = (2 * s + 1) * n;
                let w = damping_closed(ClosedKernel::Fejer, degree).unwrap();
                let e = equispaced_eigenvalues(&w, n, 1).unwrap();
                let r = (1.0 - 2.0 / n as f64) / ((2 * s + 1) as f64).powi(2);
                assert_abs_diff_eq!(e[0], 1.0 - r, epsilon = 1e-12);
                assert_abs_diff_eq!(e[n - 1], 1.0 + r, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn gershgorin_and_dense_trivial_cases() {
        let one = KernelMatrix::from_dense(DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0))).unwrap();
        let g = gershgorin_bounds(&one);
        let d = dense_extremal_eigs(&one).unwrap();
        assert_eq!((g.lower, g.upper, d.lower, d.upper), (1.0, 1.0, 1.0, 1.0));
        let id = KernelMatrix::from_dense(DMatrix::identity(7, 7)).unwrap();
        let g = gershgorin_bounds(&id);
        let d = dense_extremal_eigs(&id).unwrap();
        assert_eq!((g.lower, g.upper), (1.0, 1.0));
        assert_abs_diff_eq!(d.lower, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(d.upper, 1.0, epsilon = 1e-14);
        assert!(d.exact);
    }

    #[test]
    fn nesting_trace_and_unit_interval() {
        for seed in 0..6u64 {
            let dim = 1 + (seed % 2) as usize;
            let q = if dim == 1 { 0.02 } else { 0.08 };
            let nodes = generate_nodes(&NodeGenSpec::RandomSeparated { m: 32, q, dim }, seed).unwrap();
            let q_actual = nodes.separation_distance().unwrap();
            let degree = 2 * ((2.0 * dim as f64 / q_actual) as usize / 2 + 2);
            let spec = WeightFunctionSpec::BSpline { order: dim as u32 + 1 };
            let w = tensorize(&damping_from_weight(&spec, degree).unwrap(), dim).unwrap();
            let k = kernel_matrix(&nodes, &w).unwrap();
            let spectrum = dense_spectrum(&k).unwrap();
            assert_abs_diff_eq!(spectrum.iter().sum::<f64>(), 32.0, epsilon = 1e-8 * 32.0);
            let dense = dense_extremal_eigs(&k).unwrap();
            assert!(dense.lower <= 1.0 && dense.upper >= 1.0);
            let gers = gershgorin_bounds(&k);
            let thm = spline_qsep_bounds(dim, degree, q_actual).unwrap();
            assert!(gers.contains(&dense, 1e-12));
            assert!(thm.contains(&gers, 1e-12), "seed {seed}: {gers:?} vs {thm:?}");
        }
    }

    #[test]
    fn interlacing_on_equispaced_subsets() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..10 {
            let n = rng.random_range(3..=10usize);
            let degree = 2 * rng.random_range(1..=8usize);
            let w = damping_closed(ClosedKernel::Fejer, degree).unwrap();
            let full = equispaced_eigenvalues(&w, n, 1).unwrap();
            let nodes = generate_nodes(&NodeGenSpec::Equispaced { n, dim: 1 }, 0).unwrap();
            let picks: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.6)).collect();
            if picks.is_empty() {
                continue;
            }
            let sub = nodes.subset(&picks).unwrap();
            let e = dense_extremal_eigs(&kernel_matrix(&sub, &w).unwrap()).unwrap();
            assert!(full[0] <= e.lower + 1e-12 && e.upper <= full[n - 1] + 1e-12);
        }
    }

    #[test]
    fn power_iteration_agrees_with_full_diagonalisation() {
        let nodes = generate_nodes(&NodeGenSpec::RandomSeparated { m: 600, q: 0.001, dim: 1 }, 3).unwrap();
        let k = kernel_matrix_closed(&nodes, ClosedKernel::Fejer, 2048).unwrap();
        let power = dense_extremal_eigs(&k).unwrap();
        let full = dense_spectrum(&k).unwrap();
        assert_abs_diff_eq!(power.upper, full[599], epsilon = 1e-8);
        assert_abs_diff_eq!(power.lower, full[0], epsilon = 1e-8);
    }
}
