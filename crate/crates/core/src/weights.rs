//! Admissible weight functions and the damping factors sampled from them.
//!
//! A weight function `g` lives on `[-1/2, 1/2]`, has unit integral and
//! vanishes at the boundary. Sampling it on the grid `k/N` gives the
//! damping factors `w_k`, the diagonal of the frequency weighting that
//! defines the interpolation norm and the kernel.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::{invalid, Error, Result};
use crate::grid::{self, check_degree};

/// A weight function family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightFunctionSpec {
    /// Indicator of `(-1/2, 1/2)`, order 1.
    TopHat,
    /// `2 - 4|z|`, order 2.
    Hat,
    /// Normalised cardinal B-spline `order * N_order(order * z + order / 2)`.
    BSpline { order: u32 },
    /// `c (1/4 - z^2)^order / (gamma + |z|^(2 alpha))` on `[-1/2, 1/2]`.
    Sobolev { alpha: f64, order: u32, gamma: f64 },
}

impl WeightFunctionSpec {
    /// The smoothness order `beta`.
    pub fn order(&self) -> u32 {
        match *self {
            Self::TopHat => 1,
            Self::Hat => 2,
            Self::BSpline { order } | Self::Sobolev { order, .. } => order,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::TopHat | Self::Hat => Ok(()),
            Self::BSpline { order } => {
                if order == 0 {
                    return Err(invalid("order", "B-spline order must be at least 1"));
                }
                Ok(())
            }
            Self::Sobolev {
                alpha,
                order,
                gamma,
            } => {
                if order == 0 {
                    return Err(invalid("order", "Sobolev order must be at least 1"));
                }
                if !(alpha > 0.0 && alpha.is_finite()) {
                    return Err(invalid("alpha", format!("must be positive, got {alpha}")));
                }
                if !(gamma > 0.0 && gamma.is_finite()) {
                    return Err(invalid("gamma", format!("must be positive, got {gamma}")));
                }
                Ok(())
            }
        }
    }
}

/// Cardinal B-spline `N_order(z)`, supported on `(0, order)`.
///
/// `N_1` is the indicator of the open interval `(0, 1)`. Higher orders use
/// the recurrence `N_k(z) = (z N_{k-1}(z) + (k - z) N_{k-1}(z - 1)) / (k - 1)`
/// started from the half-open indicator of `[0, 1)`; the results are
/// continuous, so the convention only matters for order 1.
pub fn cardinal_bspline(order: u32, z: f64) -> f64 {
    let order = order as usize;
    if order == 0 {
        return 0.0;
    }
    if order == 1 {
        return if z > 0.0 && z < 1.0 { 1.0 } else { 0.0 };
    }
    if z <= 0.0 || z >= order as f64 {
        return 0.0;
    }
    // b[i] holds N_k(z - i).
    let mut b: Vec<f64> = (0..order)
        .map(|i| {
            let t = z - i as f64;
            if (0.0..1.0).contains(&t) {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    for k in 2..=order {
        let kf = k as f64;
        for i in 0..=order - k {
            let t = z - i as f64;
            b[i] = (t * b[i] + (kf - t) * b[i + 1]) / (kf - 1.0);
        }
    }
    b[0]
}

fn sobolev_profile(alpha: f64, order: u32, gamma: f64, z: f64) -> f64 {
    (0.25 - z * z).powi(order as i32) / (gamma + z.abs().powf(2.0 * alpha))
}

fn sobolev_cache() -> &'static Mutex<HashMap<[u64; 3], f64>> {
    static CACHE: OnceLock<Mutex<HashMap<[u64; 3], f64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Normalisation constant of the Sobolev weight, cached per parameter triple.
pub fn sobolev_constant(alpha: f64, order: u32, gamma: f64) -> f64 {
    let key = [alpha.to_bits(), order as u64, gamma.to_bits()];
    if let Some(c) = sobolev_cache().lock().unwrap().get(&key) {
        return *c;
    }
    // The profile is even and smooth away from 0, so integrate [0, 1/2] once.
    let half = adaptive_simpson(&|z| sobolev_profile(alpha, order, gamma, z), 0.0, 0.5, 1e-13);
    let c = 1.0 / (2.0 * half);
    // Racing initialisers compute the same value; keep whichever lands last.
    sobolev_cache().lock().unwrap().insert(key, c);
    c
}

/// Evaluates the weight function; zero outside `[-1/2, 1/2]`.
pub fn weight_eval(spec: &WeightFunctionSpec, z: f64) -> f64 {
    match *spec {
        WeightFunctionSpec::TopHat => cardinal_bspline(1, z + 0.5),
        WeightFunctionSpec::Hat => 2.0 * cardinal_bspline(2, 2.0 * z + 1.0),
        WeightFunctionSpec::BSpline { order } => {
            let b = order as f64;
            b * cardinal_bspline(order, b * z + b / 2.0)
        }
        WeightFunctionSpec::Sobolev {
            alpha,
            order,
            gamma,
        } => {
            if z.abs() > 0.5 {
                return 0.0;
            }
            sobolev_constant(alpha, order, gamma) * sobolev_profile(alpha, order, gamma, z)
        }
    }
}

/// `sum_{k=-N/2}^{N/2} g(k/N)`.
pub fn sample_norm(spec: &WeightFunctionSpec, degree: usize) -> Result<f64> {
    spec.validate()?;
    check_degree(degree)?;
    let half = (degree / 2) as i64;
    let n = degree as f64;
    let s: f64 = (-half..=half).map(|k| weight_eval(spec, k as f64 / n)).sum();
    if !(s > 0.0) {
        return Err(Error::Numerical(format!(
            "sample norm of {spec:?} at N={degree} is not positive"
        )));
    }
    Ok(s)
}

/// Layout of a damping factor vector.
#[derive(Debug, Clone, PartialEq)]
pub enum Structure {
    General,
    /// Product of the listed univariate factors along every axis.
    Tensor(Vec<f64>),
}

/// Positive frequency weights over `I_N^d`, normalised to sum 1.
#[derive(Debug, Clone, PartialEq)]
pub struct DampingFactors {
    dim: usize,
    degree: usize,
    values: Vec<f64>,
    structure: Structure,
}

impl DampingFactors {
    /// Validates and wraps a general weight vector in flat `I_N^d` order.
    pub fn from_values(dim: usize, degree: usize, values: Vec<f64>) -> Result<Self> {
        check_degree(degree)?;
        let len = grid::grid_len(degree, dim)?;
        if values.len() != len {
            return Err(Error::LengthMismatch {
                expected: len,
                found: values.len(),
            });
        }
        check_positive(&values)?;
        check_normalised(&values)?;
        Ok(Self {
            dim,
            degree,
            values,
            structure: Structure::General,
        })
    }

    /// Same as [`from_values`](Self::from_values) after dividing by the sum.
    pub fn normalised(dim: usize, degree: usize, mut values: Vec<f64>) -> Result<Self> {
        let s: f64 = values.iter().sum();
        if !(s > 0.0) {
            return Err(Error::Numerical("weights sum to a non-positive value".into()));
        }
        values.iter_mut().for_each(|v| *v /= s);
        Self::from_values(dim, degree, values)
    }

    fn univariate(degree: usize, mut values: Vec<f64>) -> Result<Self> {
        // Remove summation drift so that tensor powers stay normalised too.
        let s: f64 = values.iter().sum();
        if (s - 1.0).abs() <= 1e-9 {
            values.iter_mut().for_each(|v| *v /= s);
        }
        let mut out = Self::from_values(1, degree, values)?;
        out.structure = Structure::Tensor(out.values.clone());
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    /// The univariate factor when the weights are a tensor product.
    pub fn tensor_factor(&self) -> Option<&[f64]> {
        match &self.structure {
            Structure::Tensor(f) => Some(f),
            Structure::General => None,
        }
    }

    /// `w_k`, or 0 for `k` outside `I_N^d`.
    pub fn get(&self, k: &[i64]) -> f64 {
        grid::flatten(k, self.degree).map_or(0.0, |i| self.values[i])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn check_positive(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !(*v > 0.0)) {
        Some(index) => Err(Error::NonPositiveWeight {
            index,
            value: values[index],
        }),
        None => Ok(()),
    }
}

fn check_normalised(values: &[f64]) -> Result<()> {
    let s: f64 = values.iter().sum();
    // Plain summation of N^d terms drifts by up to about N^d ulps.
    let tol = 1e-12 + values.len() as f64 * f64::EPSILON;
    if (s - 1.0).abs() > tol {
        return Err(Error::Numerical(format!("damping factors sum to {s}, not 1")));
    }
    Ok(())
}

/// Univariate damping factors `w_k = (g(k/N) + g((k+1)/N)) / (2 ||g||_{1,N})`.
pub fn damping_from_weight(spec: &WeightFunctionSpec, degree: usize) -> Result<DampingFactors> {
    let norm = sample_norm(spec, degree)?;
    let order = spec.order() as usize;
    if degree < 2 * order {
        log::warn!("degree {degree} is below 2*order = {} for {spec:?}", 2 * order);
    }
    let n = degree as f64;
    let half = (degree / 2) as i64;
    let mut values: Vec<f64> = (-half..half)
        .map(|k| {
            (weight_eval(spec, k as f64 / n) + weight_eval(spec, (k + 1) as f64 / n))
                / (2.0 * norm)
        })
        .collect();
    if values.iter().any(|v| !(*v > 0.0)) {
        // Only the outermost factors can underflow for very fast boundary decay.
        log::warn!("clamping non-positive boundary damping factors for {spec:?} at N={degree}");
        for v in &mut values {
            if !(*v > 0.0) {
                *v = f64::MIN_POSITIVE;
            }
        }
        let s: f64 = values.iter().sum();
        values.iter_mut().for_each(|v| *v /= s);
    }
    DampingFactors::univariate(degree, values)
}

/// Kernels with closed-form coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedKernel {
    Dirichlet,
    Fejer,
    /// Requires an even `order` and degree `order * (sigma - 1) + 2`.
    Jackson { order: u32, sigma: u32 },
}

impl ClosedKernel {
    pub fn check_degree(&self, degree: usize) -> Result<()> {
        check_degree(degree)?;
        if let Self::Jackson { order, sigma } = *self {
            if order == 0 || order % 2 != 0 {
                return Err(invalid("order", format!("Jackson order must be even, got {order}")));
            }
            if sigma == 0 {
                return Err(invalid("sigma", "must be positive"));
            }
            let expected = (order * (sigma - 1) + 2) as usize;
            if degree != expected {
                return Err(invalid(
                    "degree",
                    format!("Jackson({order}, {sigma}) has degree {expected}, got {degree}"),
                ));
            }
        }
        Ok(())
    }
}

/// Univariate damping factors of the Dirichlet, Fejér or Jackson kernel.
pub fn damping_closed(kind: ClosedKernel, degree: usize) -> Result<DampingFactors> {
    kind.check_degree(degree)?;
    let n = degree as f64;
    let half = (degree / 2) as i64;
    let values = match kind {
        ClosedKernel::Dirichlet => vec![1.0 / n; degree],
        ClosedKernel::Fejer => (-half..half)
            .map(|k| (2.0 / n) * (1.0 - (2 * k + 1).abs() as f64 / n))
            .collect(),
        ClosedKernel::Jackson { order, sigma } => jackson_coefficients(order, sigma),
    };
    DampingFactors::univariate(degree, values)
}

/// Jackson coefficients over `I_N`, `N = order (sigma - 1) + 2`.
///
/// `(sin(sigma pi x) / sin(pi x))^2` has the triangular coefficients
/// `sigma - |j|`, `|j| < sigma`. Its `order/2`-fold discrete self-convolution
/// is the symmetric part; one more convolution with `(1, 1)` on frequencies
/// `(-1, 0)` supplies the `1 + e^{-2 pi i x}` factor.
fn jackson_coefficients(order: u32, sigma: u32) -> Vec<f64> {
    let s = sigma as i64;
    let triangle: Vec<f64> = (-(s - 1)..s).map(|j| (s - j.abs()) as f64).collect();
    let mut power = vec![1.0];
    for _ in 0..order / 2 {
        power = convolve(&power, &triangle);
    }
    let mut coeffs = convolve(&power, &[1.0, 1.0]);
    let total: f64 = coeffs.iter().sum();
    coeffs.iter_mut().for_each(|c| *c /= total);
    coeffs
}

fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Tensor product `w_k = prod_t w_{k_t}` of univariate factors.
pub fn tensorize(base: &DampingFactors, dim: usize) -> Result<DampingFactors> {
    if base.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: base.dim(),
        });
    }
    if dim == 0 {
        return Err(invalid("dim", "must be at least 1"));
    }
    let degree = base.degree();
    let factor = base.values().to_vec();
    let len = grid::grid_len(degree, dim)?;
    let mut values = Vec::with_capacity(len);
    let mut k = vec![0i64; dim];
    let half = (degree / 2) as i64;
    for flat in 0..len {
        grid::unflatten(flat, degree, &mut k);
        values.push(k.iter().map(|&kt| factor[(kt + half) as usize]).product());
    }
    check_positive(&values)?;
    check_normalised(&values)?;
    Ok(DampingFactors {
        dim,
        degree,
        values,
        structure: Structure::Tensor(factor),
    })
}

/// Total variation of `g^(order - 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariationBound {
    pub value: f64,
    /// `true` when the value is a sampled estimate rather than exact.
    pub estimated: bool,
}

/// Exact `(2 beta)^beta` for B-splines; a sampled estimate for Sobolev weights.
pub fn variation_bound(spec: &WeightFunctionSpec) -> Result<VariationBound> {
    spec.validate()?;
    match *spec {
        WeightFunctionSpec::TopHat | WeightFunctionSpec::BSpline { order: 1 } => Err(
            Error::Unsupported("the top-hat weight has no derivative of bounded variation".into()),
        ),
        WeightFunctionSpec::Hat => Ok(VariationBound {
            value: 16.0,
            estimated: false,
        }),
        WeightFunctionSpec::BSpline { order } => Ok(VariationBound {
            value: (2.0 * order as f64).powi(order as i32),
            estimated: false,
        }),
        WeightFunctionSpec::Sobolev { .. } => {
            let value = [1usize << 12, 1 << 14, 1 << 16]
                .into_iter()
                .map(|r| sampled_variation(spec, r))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            Ok(VariationBound {
                value,
                estimated: true,
            })
        }
    }
}

/// Variation of the `(order-1)`-th divided difference of `g` on a uniform grid
/// of `resolution` cells over the support.
pub fn sampled_variation(spec: &WeightFunctionSpec, resolution: usize) -> Result<f64> {
    spec.validate()?;
    let order = spec.order() as usize;
    if order < 2 {
        return Err(Error::Unsupported("order must be at least 2".into()));
    }
    if resolution < 2 * order {
        return Err(invalid("resolution", "too coarse for the difference order"));
    }
    let h = 1.0 / resolution as f64;
    // Pad by `order` cells on each side so boundary jumps are captured.
    let start = -0.5 - order as f64 * h;
    let count = resolution + 2 * order + 1;
    let mut diff: Vec<f64> = (0..count)
        .map(|i| weight_eval(spec, start + i as f64 * h))
        .collect();
    for _ in 0..order - 1 {
        diff = diff.windows(2).map(|w| (w[1] - w[0]) / h).collect();
    }
    Ok(diff.windows(2).map(|w| (w[1] - w[0]).abs()).sum())
}

/// Adaptive Simpson quadrature to absolute tolerance `tol`.
pub(crate) fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn step(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 48)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::zeta;
    use approx::assert_abs_diff_eq;

    /// `N_{k+1}(z) = int_{z-1}^{z} N_k`, evaluated by Gauss-Legendre on unit pieces.
    fn bspline_by_integration(order: u32, z: f64) -> f64 {
        if order == 1 {
            return if z > 0.0 && z < 1.0 { 1.0 } else { 0.0 };
        }
        const NODES: [f64; 5] = [
            -0.906_179_845_938_664,
            -0.538_469_310_105_683,
            0.0,
            0.538_469_310_105_683,
            0.906_179_845_938_664,
        ];
        const WEIGHTS: [f64; 5] = [
            0.236_926_885_056_189,
            0.478_628_670_499_366,
            0.568_888_888_888_889,
            0.478_628_670_499_366,
            0.236_926_885_056_189,
        ];
        let (a, b) = (z - 1.0, z);
        let mut cuts = vec![a];
        let mut t = a.floor() + 1.0;
        while t < b {
            cuts.push(t);
            t += 1.0;
        }
        cuts.push(b);
        cuts.windows(2)
            .map(|w| {
                let (lo, hi) = (w[0], w[1]);
                let (mid, rad) = (0.5 * (lo + hi), 0.5 * (hi - lo));
                NODES
                    .iter()
                    .zip(WEIGHTS)
                    .map(|(x, wt)| wt * rad * bspline_by_integration(order - 1, mid + rad * x))
                    .sum::<f64>()
            })
            .sum()
    }

    #[test]
    fn bspline_examples() {
        assert_eq!(cardinal_bspline(2, 1.0), 1.0);
        assert_eq!(cardinal_bspline(2, 0.5), 0.5);
        assert_eq!(cardinal_bspline(1, 0.5), 1.0);
        assert_eq!(cardinal_bspline(1, -0.1), 0.0);
        assert_eq!(cardinal_bspline(1, 0.0), 0.0);
        let oracle = bspline_by_integration(4, 2.0);
        assert_abs_diff_eq!(oracle, 2.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(cardinal_bspline(4, 2.0), oracle, epsilon = 1e-12);
    }

    #[test]
    fn bspline_matches_integral_recursion() {
        for order in 2..=5u32 {
            for i in -3..=(order as i32 * 10 + 3) {
                let z = i as f64 / 10.0 + 0.013;
                assert_abs_diff_eq!(
                    cardinal_bspline(order, z),
                    bspline_by_integration(order, z),
                    epsilon = 1e-10
                );
            }
        }
    }

    #[test]
    fn weight_examples() {
        assert_eq!(weight_eval(&WeightFunctionSpec::Hat, 0.0), 2.0);
        let specs = [
            WeightFunctionSpec::TopHat,
            WeightFunctionSpec::Hat,
            WeightFunctionSpec::BSpline { order: 3 },
            WeightFunctionSpec::BSpline { order: 4 },
            WeightFunctionSpec::Sobolev {
                alpha: 0.5,
                order: 3,
                gamma: 1e-3,
            },
        ];
        for s in &specs {
            assert_eq!(weight_eval(s, 0.5), 0.0, "{s:?}");
            assert_eq!(weight_eval(s, -0.5), 0.0, "{s:?}");
            assert_eq!(weight_eval(s, 0.7), 0.0, "{s:?}");
            assert!(weight_eval(s, 0.1) > 0.0);
        }
        for z in [-0.4, -0.1, 0.0, 0.2, 0.45] {
            assert_abs_diff_eq!(
                weight_eval(&WeightFunctionSpec::Hat, z),
                2.0 - 4.0 * f64::abs(z),
                epsilon = 1e-15
            );
        }
    }

    /// Composite 3-point Gauss-Legendre on many panels, split at the kink `z = 0`.
    fn integral_oracle(spec: &WeightFunctionSpec) -> f64 {
        let panels = 4000;
        let r = (0.6f64).sqrt();
        let g = [(-r, 5.0 / 9.0), (0.0, 8.0 / 9.0), (r, 5.0 / 9.0)];
        let mut total = 0.0;
        for (lo, hi) in [(-0.5, 0.0), (0.0, 0.5)] {
            let h: f64 = (hi - lo) / panels as f64;
            for p in 0..panels {
                let mid = lo + (p as f64 + 0.5) * h;
                total += g
                    .iter()
                    .map(|(x, wt)| 0.5 * h * wt * weight_eval(spec, mid + 0.5 * h * x))
                    .sum::<f64>();
            }
        }
        total
    }

    #[test]
    fn weights_have_unit_integral() {
        // B-spline pieces are cubic at most for order 3, and panels align with the knots.
        assert_abs_diff_eq!(
            integral_oracle(&WeightFunctionSpec::BSpline { order: 3 }),
            1.0,
            epsilon = 1e-10
        );
        let sob = WeightFunctionSpec::Sobolev {
            alpha: 0.5,
            order: 3,
            gamma: 1e-3,
        };
        assert_abs_diff_eq!(integral_oracle(&sob), 1.0, epsilon = 1e-8);
        let sob2 = WeightFunctionSpec::Sobolev {
            alpha: 1.0,
            order: 2,
            gamma: 1e-2,
        };
        assert_abs_diff_eq!(integral_oracle(&sob2), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn sample_norm_examples() {
        assert_abs_diff_eq!(sample_norm(&WeightFunctionSpec::TopHat, 8).unwrap(), 7.0);
        assert_abs_diff_eq!(
            sample_norm(&WeightFunctionSpec::Hat, 4).unwrap(),
            4.0,
            epsilon = 1e-15
        );
        for n in (4..=40).step_by(2) {
            assert_abs_diff_eq!(
                sample_norm(&WeightFunctionSpec::BSpline { order: 2 }, n).unwrap(),
                n as f64,
                epsilon = 1e-12
            );
        }
        assert!(sample_norm(&WeightFunctionSpec::Hat, 3).is_err());
        assert!(sample_norm(&WeightFunctionSpec::BSpline { order: 0 }, 4).is_err());
    }

    #[test]
    fn sample_norm_lower_bound() {
        for order in 2..=4u32 {
            let spec = WeightFunctionSpec::BSpline { order };
            let var = variation_bound(&spec).unwrap().value;
            let b = order as f64;
            for n in (2 * order as usize..=64).step_by(2) {
                let lower = n as f64
                    * (1.0 - 2.0 * zeta(b).unwrap() * (4.0 * std::f64::consts::PI * b).powf(-b) * var);
                assert!(sample_norm(&spec, n).unwrap() >= lower - 1e-12);
            }
        }
    }

    #[test]
    fn damping_examples() {
        let hat = damping_from_weight(&WeightFunctionSpec::Hat, 4).unwrap();
        let expect = [1.0 / 8.0, 3.0 / 8.0, 3.0 / 8.0, 1.0 / 8.0];
        for (a, b) in hat.values().iter().zip(expect) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
        let fej = damping_closed(ClosedKernel::Fejer, 4).unwrap();
        for (a, b) in fej.values().iter().zip(expect) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
        let dir = damping_closed(ClosedKernel::Dirichlet, 6).unwrap();
        assert!(dir.values().iter().all(|v| (*v - 1.0 / 6.0).abs() < 1e-16));
    }

    #[test]
    fn hat_construction_matches_fejer() {
        for n in [4, 8, 16, 32] {
            let a = damping_from_weight(&WeightFunctionSpec::Hat, n).unwrap();
            let b = damping_closed(ClosedKernel::Fejer, n).unwrap();
            for (x, y) in a.values().iter().zip(b.values()) {
                assert_abs_diff_eq!(*x, *y, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn top_hat_differs_from_dirichlet_at_the_boundary() {
        let w = damping_from_weight(&WeightFunctionSpec::TopHat, 8).unwrap();
        assert_abs_diff_eq!(w.values()[0], 1.0 / 14.0, epsilon = 1e-15);
        assert_abs_diff_eq!(w.values()[1], 1.0 / 7.0, epsilon = 1e-15);
    }

    #[test]
    fn all_constructors_normalised_and_positive() {
        let mut all = Vec::new();
        for n in [4usize, 6, 10, 16, 64] {
            for spec in [
                WeightFunctionSpec::TopHat,
                WeightFunctionSpec::Hat,
                WeightFunctionSpec::BSpline { order: 3 },
                WeightFunctionSpec::BSpline { order: 4 },
                WeightFunctionSpec::Sobolev {
                    alpha: 0.5,
                    order: 3,
                    gamma: 1e-3,
                },
            ] {
                all.push(damping_from_weight(&spec, n).unwrap());
            }
            all.push(damping_closed(ClosedKernel::Dirichlet, n).unwrap());
            all.push(damping_closed(ClosedKernel::Fejer, n).unwrap());
        }
        for (order, sigma) in [(2u32, 3u32), (4, 2), (4, 5), (6, 3)] {
            let n = (order * (sigma - 1) + 2) as usize;
            all.push(damping_closed(ClosedKernel::Jackson { order, sigma }, n).unwrap());
        }
        for w in &all {
            assert!(w.values().iter().all(|v| *v > 0.0));
            assert_abs_diff_eq!(w.values().iter().sum::<f64>(), 1.0, epsilon = 1e-12);
            for d in 2..=3 {
                let t = tensorize(w, d).unwrap();
                let tol = 1e-12 + t.len() as f64 * f64::EPSILON;
                assert_abs_diff_eq!(t.values().iter().sum::<f64>(), 1.0, epsilon = tol);
                assert!(t.values().iter().all(|v| *v > 0.0));
            }
        }
    }

    #[test]
    fn jackson_order_two_is_fejer() {
        for sigma in 1..=6u32 {
            let n = 2 * sigma as usize;
            let j = damping_closed(ClosedKernel::Jackson { order: 2, sigma }, n).unwrap();
            let f = damping_closed(ClosedKernel::Fejer, n).unwrap();
            for (a, b) in j.values().iter().zip(f.values()) {
                assert_abs_diff_eq!(*a, *b, epsilon = 1e-15);
            }
        }
        assert!(damping_closed(ClosedKernel::Jackson { order: 4, sigma: 3 }, 8).is_err());
        assert!(damping_closed(ClosedKernel::Jackson { order: 3, sigma: 3 }, 8).is_err());
    }

    #[test]
    fn tensorize_examples() {
        let fej = damping_closed(ClosedKernel::Fejer, 4).unwrap();
        let one = tensorize(&fej, 1).unwrap();
        assert_eq!(one.values(), fej.values());
        let two = tensorize(&fej, 2).unwrap();
        assert_abs_diff_eq!(two.get(&[0, 0]), 9.0 / 64.0, epsilon = 1e-16);
        assert_eq!(two.get(&[2, 0]), 0.0);
        assert!(matches!(two.structure(), Structure::Tensor(_)));
        assert!(tensorize(&two, 2).is_err());
    }

    #[test]
    fn variation_examples() {
        assert_eq!(variation_bound(&WeightFunctionSpec::BSpline { order: 2 }).unwrap().value, 16.0);
        assert_eq!(variation_bound(&WeightFunctionSpec::Hat).unwrap().value, 16.0);
        assert_eq!(
            variation_bound(&WeightFunctionSpec::BSpline { order: 4 }).unwrap().value,
            4096.0
        );
        assert!(matches!(
            variation_bound(&WeightFunctionSpec::TopHat),
            Err(Error::Unsupported(_))
        ));
        let sob = WeightFunctionSpec::Sobolev {
            alpha: 0.5,
            order: 3,
            gamma: 1e-3,
        };
        let bound = variation_bound(&sob).unwrap();
        assert!(bound.estimated);
        for r in [1 << 8, 1 << 10, 1 << 12, 1 << 14] {
            assert!(bound.value >= sampled_variation(&sob, r).unwrap());
        }
    }

    #[test]
    fn sampled_variation_approaches_exact_spline_value() {
        for order in 2..=4u32 {
            let spec = WeightFunctionSpec::BSpline { order };
            let exact = variation_bound(&spec).unwrap().value;
            let est = sampled_variation(&spec, 1 << 14).unwrap();
            assert!((est - exact).abs() / exact < 1e-2, "order {order}: {est} vs {exact}");
        }
    }

    #[test]
    fn from_values_validation() {
        assert!(DampingFactors::from_values(1, 4, vec![0.25; 4]).is_ok());
        assert!(matches!(
            DampingFactors::from_values(1, 4, vec![0.5, 0.5, 0.0, 0.0]),
            Err(Error::NonPositiveWeight { index: 2, .. })
        ));
        assert!(DampingFactors::from_values(1, 4, vec![0.3; 4]).is_err());
        assert!(DampingFactors::from_values(1, 4, vec![0.25; 3]).is_err());
        assert!(DampingFactors::normalised(2, 2, vec![1.0, 2.0, 3.0, 4.0]).is_ok());
    }
}
