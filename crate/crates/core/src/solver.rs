//! CGNE for the optimal interpolation problem and weighted CGNR for least squares.
//!
//! CGNE minimises `||f - f_l||_{W^-1}` over Krylov spaces of `A W A^H`; its
//! limit is the interpolant of smallest weighted norm.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::geometry::NodeSet;
use crate::transform::{
    build_operator, fourier_matrix, inner, FourierOperator, SampleVector, SpectralVector,
    TransformMode,
};
use crate::weights::DampingFactors;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub max_iterations: usize,
    /// Stop once `||r_l||_2 <= residual_tolerance * ||y||_2`.
    pub residual_tolerance: f64,
    pub transform_mode: TransformMode,
    /// Keep every residual norm, not just the last one.
    pub record_history: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iterations: 1000,
            residual_tolerance: 1e-10,
            transform_mode: TransformMode::Auto,
            record_history: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(invalid("max_iterations", "must be positive"));
        }
        if !(self.residual_tolerance > 0.0) {
            return Err(invalid(
                "residual_tolerance",
                format!("{} is not positive", self.residual_tolerance),
            ));
        }
        if let TransformMode::Fast { epsilon } = self.transform_mode {
            if !(epsilon > 0.0 && epsilon < 1.0) {
                return Err(invalid("epsilon", format!("{epsilon} not in (0, 1)")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub coefficients: SpectralVector,
    /// `||r_l||_2`, starting with the initial residual.
    pub residual_history: Vec<f64>,
    /// `||f_ref - f_l||_{W^-1}` when a reference solution was supplied to CGNE.
    pub error_history: Option<Vec<f64>>,
    pub iterations_used: usize,
    pub converged: bool,
    /// The search direction collapsed before the tolerance was met.
    pub stagnated: bool,
    /// `||f||_{W^-1}` for CGNE; `||f||_2` for CGNR.
    pub weighted_norm: f64,
    /// `||y||_2`.
    pub data_norm: f64,
}

impl SolveResult {
    pub fn final_residual(&self) -> f64 {
        *self.residual_history.last().expect("history holds r_0")
    }

    pub fn relative_residual(&self) -> f64 {
        if self.data_norm == 0.0 {
            self.final_residual()
        } else {
            self.final_residual() / self.data_norm
        }
    }
}

/// `||f||_{W^-1} = (sum_k |f_k|^2 / w_k)^(1/2)`.
pub fn weighted_coeff_norm(coeffs: &SpectralVector, w: &DampingFactors) -> Result<f64> {
    check_weights(coeffs, w)?;
    Ok(coeffs
        .values()
        .iter()
        .zip(w.values())
        .map(|(f, wk)| f.norm_sqr() / wk)
        .sum::<f64>()
        .sqrt())
}

/// `2 ((sqrt(L) - sqrt(l)) / (sqrt(L) + sqrt(l)))^iter * e0`.
pub fn apriori_error_bound(lambda: f64, upper: f64, iteration: usize, e0: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(invalid("lambda", format!("{lambda} is not positive")));
    }
    if !(upper >= lambda) {
        return Err(invalid("upper", format!("{upper} is below lambda = {lambda}")));
    }
    let (a, b) = (upper.sqrt(), lambda.sqrt());
    let rate = (a - b) / (a + b);
    Ok(2.0 * rate.powi(iteration.min(i32::MAX as usize) as i32) * e0)
}

fn check_weights(coeffs: &SpectralVector, w: &DampingFactors) -> Result<()> {
    if coeffs.dim() != w.dim() {
        return Err(Error::DimensionMismatch {
            expected: w.dim(),
            found: coeffs.dim(),
        });
    }
    if coeffs.degree() != w.degree() {
        return Err(Error::LengthMismatch {
            expected: w.len(),
            found: coeffs.len(),
        });
    }
    Ok(())
}

fn weighted_diff_norm(a: &SpectralVector, b: &SpectralVector, w: &DampingFactors) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .zip(w.values())
        .map(|((x, y), wk)| (x - y).norm_sqr() / wk)
        .sum::<f64>()
        .sqrt()
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// CGNE with the transform chosen by `cfg.transform_mode`.
pub fn cgne(
    nodes: &NodeSet,
    y: &SampleVector,
    w: &DampingFactors,
    f0: &SpectralVector,
    cfg: &SolverConfig,
) -> Result<SolveResult> {
    cfg.validate()?;
    let op = build_operator(nodes, w.degree(), cfg.transform_mode)?;
    cgne_with_operator(op.as_ref(), y, w, f0, cfg, None)
}

/// CGNE that also records `||f_ref - f_l||_{W^-1}` at every step.
pub fn cgne_tracked(
    nodes: &NodeSet,
    y: &SampleVector,
    w: &DampingFactors,
    f0: &SpectralVector,
    cfg: &SolverConfig,
    reference: &SpectralVector,
) -> Result<SolveResult> {
    cfg.validate()?;
    let op = build_operator(nodes, w.degree(), cfg.transform_mode)?;
    cgne_with_operator(op.as_ref(), y, w, f0, cfg, Some(reference))
}

/// CGNE on a prebuilt operator, so sweeps can reuse one NFFT plan.
pub fn cgne_with_operator(
    op: &dyn FourierOperator,
    y: &SampleVector,
    w: &DampingFactors,
    f0: &SpectralVector,
    cfg: &SolverConfig,
    reference: Option<&SpectralVector>,
) -> Result<SolveResult> {
    cfg.validate()?;
    check_weights(f0, w)?;
    if let Some(r) = reference {
        check_weights(r, w)?;
    }
    let wv = w.values();
    let data_norm = y.norm_l2();
    let target = cfg.residual_tolerance * data_norm;

    let mut f = f0.clone();
    let af = op.forward(&f)?;
    let mut r: Vec<Complex64> = y.values().iter().zip(af.values()).map(|(a, b)| a - b).collect();
    let mut p = op.adjoint(&SampleVector::new(r.clone()))?;
    let mut rr = norm(&r).powi(2);
    let mut history = vec![rr.sqrt()];
    let mut errors = reference.map(|fr| vec![weighted_diff_norm(fr, &f, w)]);
    let mut converged = rr.sqrt() <= target;
    let mut stagnated = false;
    let mut iterations = 0;

    let mut wp = SpectralVector::zeros(f.dim(), f.degree())?;
    while !converged && iterations < cfg.max_iterations {
        for ((o, pk), wk) in wp.values_mut().iter_mut().zip(p.values()).zip(wv) {
            *o = pk * wk;
        }
        let denom: f64 = p.values().iter().zip(wv).map(|(pk, wk)| pk.norm_sqr() * wk).sum();
        if !(denom > f64::EPSILON * p.norm_l2() * wp.norm_l2()) {
            stagnated = true;
            log::warn!("cgne stagnated after {iterations} iterations");
            break;
        }
        let alpha = rr / denom;
        for (fk, wpk) in f.values_mut().iter_mut().zip(wp.values()) {
            *fk += wpk * alpha;
        }
        let awp = op.forward(&wp)?;
        for (rj, q) in r.iter_mut().zip(awp.values()) {
            *rj -= q * alpha;
        }
        iterations += 1;
        let rr_new = norm(&r).powi(2);
        if cfg.record_history {
            history.push(rr_new.sqrt());
        } else {
            history[0] = rr_new.sqrt();
        }
        if let (Some(errs), Some(fr)) = (errors.as_mut(), reference) {
            errs.push(weighted_diff_norm(fr, &f, w));
        }
        if rr_new.sqrt() <= target {
            converged = true;
            break;
        }
        let beta = rr_new / rr;
        rr = rr_new;
        let ahr = op.adjoint(&SampleVector::new(r.clone()))?;
        for (pk, a) in p.values_mut().iter_mut().zip(ahr.values()) {
            *pk = *pk * beta + a;
        }
    }
    if !converged && !stagnated {
        log::info!(
            "cgne hit {} iterations at relative residual {:.3e}",
            cfg.max_iterations,
            rr.sqrt() / data_norm
        );
    }
    let weighted_norm = weighted_coeff_norm(&f, w)?;
    Ok(SolveResult {
        coefficients: f,
        residual_history: history,
        error_history: errors,
        iterations_used: iterations,
        converged,
        stagnated,
        weighted_norm,
        data_norm,
    })
}

/// Weighted CGNR from zero: minimises `||y - A f||_W` with `W = diag(sample_weights)`.
///
/// Converges when either the residual meets the tolerance (consistent data) or
/// the normal-equation residual `A^H W r` drops below the tolerance relative to
/// `A^H W y` (least-squares optimum reached).
pub fn cgnr(
    nodes: &NodeSet,
    y: &SampleVector,
    sample_weights: &[f64],
    degree: usize,
    cfg: &SolverConfig,
) -> Result<SolveResult> {
    cfg.validate()?;
    let op = build_operator(nodes, degree, cfg.transform_mode)?;
    cgnr_with_operator(op.as_ref(), y, sample_weights, cfg)
}

pub fn cgnr_with_operator(
    op: &dyn FourierOperator,
    y: &SampleVector,
    sample_weights: &[f64],
    cfg: &SolverConfig,
) -> Result<SolveResult> {
    cfg.validate()?;
    let m = op.nodes().len();
    if y.len() != m {
        return Err(Error::LengthMismatch {
            expected: m,
            found: y.len(),
        });
    }
    if sample_weights.len() != m {
        return Err(Error::LengthMismatch {
            expected: m,
            found: sample_weights.len(),
        });
    }
    if let Some((index, &value)) = sample_weights
        .iter()
        .enumerate()
        .find(|(_, v)| !(**v > 0.0 && v.is_finite()))
    {
        return Err(Error::NonPositiveWeight { index, value });
    }
    let weigh = |r: &[Complex64]| -> SampleVector {
        SampleVector::new(r.iter().zip(sample_weights).map(|(a, b)| a * b).collect())
    };
    let data_norm = y.norm_l2();
    let target = cfg.residual_tolerance * data_norm;

    let mut f = SpectralVector::zeros(op.nodes().dim(), op.degree())?;
    let mut r: Vec<Complex64> = y.values().to_vec();
    let mut s = op.adjoint(&weigh(&r))?;
    let s0 = s.norm_l2();
    let mut p = s.clone();
    let mut gamma = s0 * s0;
    let mut history = vec![data_norm];
    let mut converged = data_norm <= target || s0 == 0.0;
    let mut stagnated = false;
    let mut iterations = 0;

    while !converged && iterations < cfg.max_iterations {
        let q = op.forward(&p)?;
        let denom: f64 = q
            .values()
            .iter()
            .zip(sample_weights)
            .map(|(qj, wj)| qj.norm_sqr() * wj)
            .sum();
        if !(denom > 0.0) {
            stagnated = true;
            log::warn!("cgnr stagnated after {iterations} iterations");
            break;
        }
        let alpha = gamma / denom;
        for (fk, pk) in f.values_mut().iter_mut().zip(p.values()) {
            *fk += pk * alpha;
        }
        for (rj, qj) in r.iter_mut().zip(q.values()) {
            *rj -= qj * alpha;
        }
        iterations += 1;
        let res = norm(&r);
        if cfg.record_history {
            history.push(res);
        } else {
            history[0] = res;
        }
        s = op.adjoint(&weigh(&r))?;
        let gamma_new = s.norm_l2().powi(2);
        if res <= target || gamma_new.sqrt() <= cfg.residual_tolerance * s0 {
            converged = true;
            break;
        }
        let beta = gamma_new / gamma;
        gamma = gamma_new;
        for (pk, sk) in p.values_mut().iter_mut().zip(s.values()) {
            *pk = *pk * beta + sk;
        }
    }
    let weighted_norm = f.norm_l2();
    Ok(SolveResult {
        coefficients: f,
        residual_history: history,
        error_history: None,
        iterations_used: iterations,
        converged,
        stagnated,
        weighted_norm,
        data_norm,
    })
}

/// Dense reference for the CGNE limit: solve `K f~ = y` with `K = A W A^H`,
/// then `f = W A^H f~`.
pub fn dense_min_norm_solution(
    nodes: &NodeSet,
    y: &SampleVector,
    w: &DampingFactors,
) -> Result<SpectralVector> {
    if nodes.dim() != w.dim() {
        return Err(Error::DimensionMismatch {
            expected: w.dim(),
            found: nodes.dim(),
        });
    }
    if y.len() != nodes.len() {
        return Err(Error::LengthMismatch {
            expected: nodes.len(),
            found: y.len(),
        });
    }
    let a = fourier_matrix(nodes, w.degree())?;
    let wdiag = DVector::from_iterator(w.len(), w.values().iter().map(|v| Complex64::new(*v, 0.0)));
    let mut aw = a.clone();
    for (mut col, wk) in aw.column_iter_mut().zip(wdiag.iter()) {
        col *= *wk;
    }
    let k: DMatrix<Complex64> = &aw * a.adjoint();
    let rhs = DVector::from_column_slice(y.values());
    let ft = k
        .clone()
        .cholesky()
        .map(|c| c.solve(&rhs))
        .or_else(|| k.lu().solve(&rhs))
        .ok_or_else(|| Error::Singular("kernel matrix is singular".into()))?;
    let f = aw.adjoint() * ft;
    SpectralVector::from_values(nodes.dim(), w.degree(), f.iter().copied().collect())
}

/// `sum_k conj(a_k) b_k / w_k`.
pub fn weighted_inner(a: &SpectralVector, b: &SpectralVector, w: &DampingFactors) -> Result<Complex64> {
    check_weights(a, w)?;
    a.same_shape(b)?;
    let scaled: Vec<Complex64> = b.values().iter().zip(w.values()).map(|(x, wk)| x / wk).collect();
    Ok(inner(a.values(), &scaled))
}
