use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trigint::prelude::*;
use trigint::solver::{cgne_tracked, dense_min_norm_solution};
use trigint::stability::dense_spectrum;
use trigint::transform::inner;

fn complex_vec(len: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

fn max_dev(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fast_transform_contract(
        seed in 0u64..1000,
        dim in 1usize..=2,
        half in 2usize..=8,
        m in 5usize..=60,
        tight in any::<bool>(),
    ) {
        let degree = 2 * half;
        let eps = if tight { 1e-10 } else { 1e-6 };
        let nodes = generate_nodes(&NodeGenSpec::Uniform { m, dim }, seed).unwrap();
        let plan = NfftPlan::new(nodes.clone(), degree, eps).unwrap();
        let len = degree.pow(dim as u32);
        let f = complex_vec(len, seed);
        let y = complex_vec(m, seed + 1);
        let f = SpectralVector::from_values(dim, degree, f).unwrap();
        let y = SampleVector::new(y);

        let fast = nfft_forward(&plan, &f).unwrap();
        let slow = ndft_forward(&f, &nodes).unwrap();
        prop_assert!(max_dev(fast.values(), slow.values()) <= eps * f.norm_l1());
        let fast_adj = nfft_adjoint(&plan, &y).unwrap();
        let slow_adj = ndft_adjoint(&y, &nodes, degree).unwrap();
        prop_assert!(max_dev(fast_adj.values(), slow_adj.values()) <= eps * y.norm_l1());

        let lhs = inner(y.values(), fast.values());
        let rhs = inner(fast_adj.values(), f.values());
        prop_assert!((lhs - rhs).norm() <= 2.0 * eps * f.norm_l1() * y.norm_l1());
    }

    #[test]
    fn kernel_spectrum_has_trace_m_and_straddles_one(
        seed in 0u64..1000,
        dim in 1usize..=2,
        m in 2usize..=40,
        half in 1usize..=10,
    ) {
        let degree = 2 * half;
        let nodes = generate_nodes(&NodeGenSpec::Uniform { m, dim }, seed).unwrap();
        let w = tensorize(&damping_closed(ClosedKernel::Fejer, degree).unwrap(), dim).unwrap();
        let k = kernel_matrix(&nodes, &w).unwrap();
        let spec = dense_spectrum(&k).unwrap();
        let trace: f64 = spec.iter().sum();
        prop_assert!((trace - m as f64).abs() <= 1e-8 * m as f64);
        prop_assert!(spec[0] <= 1.0 + 1e-12 && spec[m - 1] >= 1.0 - 1e-12);
        let g = gershgorin_bounds(&k);
        prop_assert!(g.lower <= spec[0] + 1e-12 && spec[m - 1] <= g.upper + 1e-12);
    }

    #[test]
    fn cgne_limit_is_the_min_norm_interpolant(
        seed in 0u64..1000,
        m in 2usize..=16,
        half in 9usize..=16,
    ) {
        let degree = 2 * half;
        let nodes = generate_nodes(&NodeGenSpec::RandomSeparated { m, q: 0.03, dim: 1 }, seed).unwrap();
        let w = damping_from_weight(&WeightFunctionSpec::BSpline { order: 2 }, degree).unwrap();
        let y = SampleVector::new(complex_vec(m, seed));
        let exact = dense_min_norm_solution(&nodes, &y, &w).unwrap();
        let cfg = SolverConfig {
            max_iterations: 500,
            residual_tolerance: 1e-12,
            transform_mode: TransformMode::Direct,
            record_history: true,
        };
        let f0 = SpectralVector::zeros(1, degree).unwrap();
        let res = cgne_tracked(&nodes, &y, &w, &f0, &cfg, &exact).unwrap();
        prop_assert!(res.converged);
        let err = *res.error_history.as_ref().unwrap().last().unwrap();
        prop_assert!(err <= 1e-8 * weighted_coeff_norm(&exact, &w).unwrap().max(1.0));

        // Interpolation exactness.
        let fx = ndft_forward(&res.coefficients, &nodes).unwrap();
        prop_assert!(max_dev(fx.values(), y.values()) <= 10.0 * cfg.residual_tolerance * y.norm_l2());
    }
}

#[test]
fn cgne_handles_two_dimensional_separated_nodes() {
    let nodes = generate_nodes(&NodeGenSpec::RandomSeparated { m: 50, q: 0.08, dim: 2 }, 5).unwrap();
    let w = tensorize(
        &damping_from_weight(&WeightFunctionSpec::BSpline { order: 3 }, 64).unwrap(),
        2,
    )
    .unwrap();
    let y = SampleVector::from_real(&(0..50).map(|j| ((j * 7 % 11) as f64).cos()).collect::<Vec<_>>());
    let f0 = SpectralVector::zeros(2, 64).unwrap();
    let res = cgne(&nodes, &y, &w, &f0, &SolverConfig::default()).unwrap();
    assert!(res.converged);
    assert!(res.relative_residual() <= 1e-10);
    let bracket = spline_qsep_bounds(2, 64, nodes.separation_distance().unwrap()).unwrap();
    let dense = dense_extremal_eigs(&kernel_matrix(&nodes, &w).unwrap()).unwrap();
    assert!(bracket.contains(&dense, 1e-12));
}
