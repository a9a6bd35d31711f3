//! The four experiment drivers. Each writes one CSV with a row per sweep
//! point; rows carry the measured quantity next to the bound that applies.

use std::path::{Path, PathBuf};

use log::info;
use num_complex::Complex64;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trigint::geometry::{generate_nodes, NodeGenSpec, NodeSet};
use trigint::kernels::{kernel_matrix, kernel_matrix_closed, KernelMatrix};
use trigint::solver::{
    apriori_error_bound, cgne_with_operator, cgnr_with_operator, dense_min_norm_solution,
    weighted_coeff_norm, SolveResult,
};
use trigint::stability::{
    dense_extremal_eigs, equispaced_bounds, equispaced_closed_bounds, equispaced_eigenvalues,
    jitter_bounds, separated_bounds, spline_qsep_bounds, EigenBounds,
};
use trigint::transform::{build_operator, FourierOperator, SampleVector, SpectralVector};
use trigint::weights::WeightFunctionSpec;

use crate::config::{DatasetSource, ExperimentConfig, ExperimentKind, KernelSpec, NodeSource};
use crate::dataset::{ingest_samples, synthetic_dataset, ScatteredDataset};
use crate::error::{CliError, CliResult, Context};
use crate::export::{export_results, Cell, Table};

/// What a run produced.
#[derive(Debug, Clone)]
pub struct Report {
    /// The main sweep table, as written to the configured output.
    pub table: Table,
    pub files: Vec<PathBuf>,
}

/// Seed of sweep point `idx`.
pub fn point_seed(seed: u64, idx: u64) -> u64 {
    seed ^ idx.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

pub fn run_experiment(cfg: &ExperimentConfig) -> CliResult<Report> {
    cfg.validate()?;
    info!("running {} -> {}", cfg.experiment.name(), cfg.output.display());
    let mut files = Vec::new();
    let result = match cfg.experiment {
        ExperimentKind::CondVsDegree => cond_vs_degree(cfg),
        ExperimentKind::JitterSweep => jitter_sweep(cfg),
        ExperimentKind::ErrorDecay => error_decay(cfg),
        ExperimentKind::Reconstruct => reconstruct(cfg, &mut files),
    };
    // Whatever finished is written even when a later point failed.
    let (table, failure) = match result {
        Ok(table) => (table, None),
        Err((table, err)) => (table, Some(err)),
    };
    if !table.rows.is_empty() {
        export_results(&table, &cfg.output)?;
        files.insert(0, cfg.output.clone());
    }
    match failure {
        Some(err) => Err(err),
        None => Ok(Report { table, files }),
    }
}

type Partial = Result<Table, (Table, CliError)>;

/// Runs `body` for each point, tagging failures with the point's label.
fn sweep<P>(
    mut table: Table,
    points: impl IntoIterator<Item = P>,
    label: impl Fn(&P) -> String,
    mut body: impl FnMut(&P, &mut Table) -> CliResult<()>,
) -> Partial {
    for p in points {
        if let Err(e) = body(&p, &mut table) {
            let err = match e {
                CliError::Numeric { context, source } => CliError::Numeric {
                    context: format!("{}: {context}", label(&p)),
                    source,
                },
                CliError::Config(msg) => CliError::Config(format!("{}: {msg}", label(&p))),
                other => other,
            };
            return Err((table, err));
        }
    }
    Ok(table)
}

fn load_nodes(source: &NodeSource, seed: u64) -> CliResult<NodeSet> {
    match source {
        NodeSource::Generated(spec) => generate_nodes(spec, seed).at(|| format!("generating {spec:?}")),
        NodeSource::File { path, dim } => NodeSet::load(path, *dim).at(|| path.display().to_string()),
    }
}

fn bound_cells(b: Option<&EigenBounds>) -> Vec<Cell> {
    match b {
        Some(b) => vec![
            b.lower.into(),
            b.upper.into(),
            b.cond().into(),
            b.provenance.label().into(),
        ],
        None => vec![Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty],
    }
}

/// A-priori theory bracket for `nodes`, if the kernel has a certificate whose
/// hypotheses hold. Among applicable brackets the tighter one wins.
fn theory_bracket(kernel: &KernelSpec, degree: usize, nodes: &NodeSet) -> Option<EigenBounds> {
    let dim = nodes.dim();
    let q = nodes.separation_distance().ok()?;
    let mut best: Option<EigenBounds> = None;
    let mut offer = |b: EigenBounds| {
        let width = |b: &EigenBounds| b.upper - b.lower;
        if best.as_ref().is_none_or(|cur| width(&b) < width(cur)) {
            best = Some(b);
        }
    };
    if let Some(decay) = kernel.decay(degree) {
        if let Ok(b) = separated_bounds(dim, &decay, degree, q) {
            offer(b);
        }
    }
    if let KernelSpec::Weight(WeightFunctionSpec::BSpline { order }) = kernel {
        if *order as usize == dim + 1 {
            if let Ok(b) = spline_qsep_bounds(dim, degree, q) {
                offer(b);
            }
        }
    }
    best
}

fn kernel_matrix_for(kernel: &KernelSpec, degree: usize, nodes: &NodeSet) -> trigint::Result<KernelMatrix> {
    match kernel.closed(degree)? {
        Some(kind) => kernel_matrix_closed(nodes, kind, degree),
        None => kernel_matrix(nodes, &kernel.damping(degree, nodes.dim())?),
    }
}

fn cond_vs_degree(cfg: &ExperimentConfig) -> Partial {
    let table = Table::new(&[
        "kernel", "degree", "nodes", "lambda_min", "lambda_max", "cond", "method",
        "bound_lower", "bound_upper", "bound_cond", "bound_source",
    ]);
    let nodes = match load_nodes(&cfg.nodes, cfg.seed) {
        Ok(n) => n,
        Err(e) => return Err((table, e)),
    };
    let grid = match cfg.nodes {
        NodeSource::Generated(NodeGenSpec::Equispaced { n, .. }) => Some(n),
        _ => None,
    };
    let points: Vec<(KernelSpec, usize)> = cfg
        .kernels
        .iter()
        .flat_map(|k| cfg.degrees.iter().map(move |n| (*k, *n)))
        .collect();
    sweep(
        table,
        points,
        |(k, n)| format!("kernel {k}, N = {n}"),
        |&(kernel, degree), table| {
            let dim = nodes.dim();
            let ctx = || format!("degree {degree}");
            let (measured, method, bound) = match grid {
                Some(n) => {
                    let w = kernel.damping(degree, dim).at(ctx)?;
                    let eig = equispaced_eigenvalues(&w, n, dim).at(ctx)?;
                    let bound = match kernel.closed(degree).at(ctx)? {
                        Some(kind) => equispaced_closed_bounds(kind, degree, n, dim).ok(),
                        None => None,
                    }
                    .or_else(|| equispaced_bounds(&w, n, dim).ok());
                    ((eig[0], eig[eig.len() - 1]), "aliasing", bound)
                }
                None => {
                    let k = kernel_matrix_for(&kernel, degree, &nodes).at(ctx)?;
                    let e = dense_extremal_eigs(&k).at(ctx)?;
                    ((e.lower, e.upper), "dense", theory_bracket(&kernel, degree, &nodes))
                }
            };
            let cond = (measured.0 > 0.0).then(|| measured.1 / measured.0);
            let mut row = vec![
                kernel.to_string().into(),
                degree.into(),
                nodes.len().into(),
                measured.0.into(),
                measured.1.into(),
                cond.into(),
                method.into(),
            ];
            row.extend(bound_cells(bound.as_ref()));
            table.push(row);
            Ok(())
        },
    )
}

fn jitter_sweep(cfg: &ExperimentConfig) -> Partial {
    let table = Table::new(&[
        "kernel", "nodes", "degree", "jitter", "reruns", "cond_max", "cond_mean",
        "lambda_min", "lambda_max", "bound_lower", "bound_upper", "bound_cond", "bound_source",
    ]);
    let points: Vec<(usize, usize)> = cfg.sizes.iter().copied().enumerate().collect();
    sweep(
        table,
        points,
        |(_, m)| format!("M = {m}"),
        |&(idx, m), table| {
            let degree = cfg.degree_factor * m;
            let mut stats = vec![(0.0f64, 0.0f64, f64::INFINITY, 0.0f64); cfg.kernels.len()];
            for rerun in 0..cfg.reruns {
                let seed = point_seed(cfg.seed, (idx * cfg.reruns + rerun) as u64);
                let spec = NodeGenSpec::Jittered { m, epsilon: cfg.jitter };
                let nodes = generate_nodes(&spec, seed).at(|| format!("rerun {rerun}"))?;
                for (kernel, s) in cfg.kernels.iter().zip(stats.iter_mut()) {
                    let k = kernel_matrix_for(kernel, degree, &nodes).at(|| format!("rerun {rerun}"))?;
                    let e = dense_extremal_eigs(&k).at(|| format!("rerun {rerun}"))?;
                    let cond = if e.lower > 0.0 { e.upper / e.lower } else { f64::INFINITY };
                    s.0 = s.0.max(cond);
                    s.1 += cond / cfg.reruns as f64;
                    s.2 = s.2.min(e.lower);
                    s.3 = s.3.max(e.upper);
                }
            }
            for (kernel, s) in cfg.kernels.iter().zip(&stats) {
                let bound = kernel
                    .decay(degree)
                    .and_then(|d| jitter_bounds(&d, degree, m, cfg.jitter).ok());
                let mut row = vec![
                    kernel.to_string().into(),
                    m.into(),
                    degree.into(),
                    cfg.jitter.into(),
                    cfg.reruns.into(),
                    s.0.into(),
                    s.1.into(),
                    s.2.into(),
                    s.3.into(),
                ];
                row.extend(bound_cells(bound.as_ref()));
                table.push(row);
            }
            Ok(())
        },
    )
}

/// Native-norm error of CGNE against the dense minimum-norm interpolant.
fn error_decay(cfg: &ExperimentConfig) -> Partial {
    let table = Table::new(&[
        "kernel", "degree", "iteration", "error", "residual", "bound_dense", "bound_theory",
        "lambda_min", "lambda_max", "theory_lower", "theory_upper",
    ]);
    let nodes = match load_nodes(&cfg.nodes, cfg.seed) {
        Ok(n) => n,
        Err(e) => return Err((table, e)),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(point_seed(cfg.seed, u64::MAX));
    let y = SampleVector::new(
        (0..nodes.len())
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect(),
    );
    let points: Vec<(KernelSpec, usize)> = cfg
        .kernels
        .iter()
        .flat_map(|k| cfg.degrees.iter().map(move |n| (*k, *n)))
        .collect();
    sweep(
        table,
        points,
        |(k, n)| format!("kernel {k}, N = {n}"),
        |&(kernel, degree), table| {
            let ctx = || format!("degree {degree}");
            let w = kernel.damping(degree, nodes.dim()).at(ctx)?;
            let dense = dense_extremal_eigs(&kernel_matrix_for(&kernel, degree, &nodes).at(ctx)?).at(ctx)?;
            let theory = theory_bracket(&kernel, degree, &nodes).filter(|b| b.certifying);
            let exact = dense_min_norm_solution(&nodes, &y, &w).at(ctx)?;
            let op = build_operator(&nodes, degree, cfg.solver.transform_mode).at(ctx)?;
            let f0 = SpectralVector::zeros(nodes.dim(), degree).at(ctx)?;
            let mut solver = cfg.solver.clone();
            solver.record_history = true;
            let res = cgne_with_operator(op.as_ref(), &y, &w, &f0, &solver, Some(&exact)).at(ctx)?;
            let errors = res.error_history.as_deref().unwrap_or_default();
            let e0 = weighted_coeff_norm(&exact, &w).at(ctx)?;
            for (l, (err, resid)) in errors.iter().zip(&res.residual_history).enumerate() {
                let b_dense = (dense.lower > 0.0)
                    .then(|| apriori_error_bound(dense.lower, dense.upper, l, e0).ok())
                    .flatten();
                let b_theory = theory
                    .as_ref()
                    .and_then(|b| apriori_error_bound(b.lower, b.upper, l, e0).ok());
                table.push(vec![
                    kernel.to_string().into(),
                    degree.into(),
                    l.into(),
                    (*err).into(),
                    (*resid).into(),
                    b_dense.into(),
                    b_theory.into(),
                    dense.lower.into(),
                    dense.upper.into(),
                    theory.map(|b| b.lower).into(),
                    theory.map(|b| b.upper).into(),
                ]);
            }
            Ok(())
        },
    )
}

fn load_dataset(cfg: &ExperimentConfig) -> CliResult<(ScatteredDataset, Option<SpectralVector>)> {
    match &cfg.dataset {
        DatasetSource::Synthetic { m } => {
            let (data, truth) = synthetic_dataset(*m, cfg.seed)?;
            Ok((data, Some(truth)))
        }
        DatasetSource::File { path, dim, normalization } => {
            Ok((ingest_samples(path, *dim, *normalization)?, None))
        }
    }
}

fn sibling(output: &Path, suffix: &str) -> PathBuf {
    let stem = output.file_stem().and_then(|s| s.to_str()).unwrap_or("report");
    output.with_file_name(format!("{stem}_{suffix}.csv"))
}

/// Relative residual of `f` on `data`, measured with an operator on its nodes.
fn relative_residual(op: &dyn FourierOperator, f: &SpectralVector, data: &ScatteredDataset) -> trigint::Result<f64> {
    let fx = op.forward(f)?;
    let diff: f64 = fx
        .values()
        .iter()
        .zip(data.values.values())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let norm = data.values.norm_l2();
    Ok(if norm > 0.0 { diff / norm } else { diff })
}

/// Holdout reconstruction with CGNE and CGNR.
fn reconstruct(cfg: &ExperimentConfig, files: &mut Vec<PathBuf>) -> Partial {
    let table = Table::new(&[
        "kernel", "degree", "solver", "train", "holdout", "iterations", "converged",
        "r", "r_tilde", "coeff_error",
    ]);
    let (data, truth) = match load_dataset(cfg) {
        Ok(d) => d,
        Err(e) => return Err((table, e)),
    };
    if cfg.holdout >= data.len() {
        let err = CliError::Config(format!("holdout {} leaves no training data", cfg.holdout));
        return Err((table, err));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut held = sample(&mut rng, data.len(), cfg.holdout).into_vec();
    held.sort_unstable();
    let (train, test) = match data.split(&held) {
        Ok(s) => s,
        Err(e) => return Err((table, e)),
    };
    let dim = data.dim();
    let points: Vec<(usize, KernelSpec, usize)> = cfg
        .kernels
        .iter()
        .enumerate()
        .flat_map(|(i, k)| cfg.degrees.iter().map(move |n| (i, *k, *n)))
        .collect();
    sweep(
        table,
        points,
        |(_, k, n)| format!("kernel {k}, N = {n}"),
        |&(kidx, kernel, degree), table| {
            let ctx = || format!("degree {degree}");
            let w = kernel.damping(degree, dim).at(ctx)?;
            let op = build_operator(&train.nodes, degree, cfg.solver.transform_mode).at(ctx)?;
            let test_op = build_operator(&test.nodes, degree, cfg.solver.transform_mode).at(ctx)?;
            let f0 = SpectralVector::zeros(dim, degree).at(ctx)?;
            let ne = cgne_with_operator(op.as_ref(), &train.values, &w, &f0, &cfg.solver, None).at(ctx)?;
            let ones = vec![1.0; train.len()];
            let nr = cgnr_with_operator(op.as_ref(), &train.values, &ones, &cfg.solver).at(ctx)?;
            for (name, res) in [("cgne", &ne), ("cgnr", &nr)] {
                let r_tilde = if test.is_empty() {
                    None
                } else {
                    Some(relative_residual(test_op.as_ref(), &res.coefficients, &test).at(ctx)?)
                };
                let r = relative_residual(op.as_ref(), &res.coefficients, &train).at(ctx)?;
                let coeff_error = truth.as_ref().map(|t| coefficient_error(&res.coefficients, t));
                table.push(vec![
                    kernel.to_string().into(),
                    degree.into(),
                    name.into(),
                    train.len().into(),
                    test.len().into(),
                    res.iterations_used.into(),
                    res.converged.into(),
                    r.into(),
                    r_tilde.into(),
                    coeff_error.into(),
                ]);
            }
            let tag = format!("k{kidx}_n{degree}");
            let coeff_path = sibling(&cfg.output, &format!("coefficients_{tag}"));
            export_results(&coefficient_table(&ne), &coeff_path)?;
            files.push(coeff_path);
            let grid_path = sibling(&cfg.output, &format!("grid_{tag}"));
            export_results(&grid_table(&ne.coefficients, cfg)?, &grid_path)?;
            files.push(grid_path);
            Ok(())
        },
    )
}

/// `||f - truth||_2 / ||truth||_2` over the union of both frequency grids.
fn coefficient_error(f: &SpectralVector, truth: &SpectralVector) -> f64 {
    let dim = f.dim();
    let big = if f.degree() >= truth.degree() { f } else { truth };
    let mut k = vec![0i64; dim];
    let mut diff = 0.0;
    for flat in 0..big.len() {
        let mut rest = flat;
        for kt in k.iter_mut().rev() {
            *kt = (rest % big.degree()) as i64 - (big.degree() / 2) as i64;
            rest /= big.degree();
        }
        diff += (f.get(&k) - truth.get(&k)).norm_sqr();
    }
    diff.sqrt() / truth.norm_l2()
}

fn coefficient_table(res: &SolveResult) -> Table {
    let f = &res.coefficients;
    let dim = f.dim();
    let n = f.degree();
    let mut header: Vec<String> = (1..=dim).map(|t| format!("k{t}")).collect();
    header.extend(["re".to_string(), "im".to_string()]);
    let mut table = Table { header, rows: Vec::with_capacity(f.len()) };
    for (flat, c) in f.values().iter().enumerate() {
        let mut k = vec![Cell::Empty; dim];
        let mut rest = flat;
        for kt in k.iter_mut().rev() {
            *kt = Cell::Int((rest % n) as i64 - (n / 2) as i64);
            rest /= n;
        }
        k.extend([Cell::Real(c.re), Cell::Real(c.im)]);
        table.rows.push(k);
    }
    table
}

/// Values of `f` on the regular grid, at most `2^16` points in total.
fn grid_table(f: &SpectralVector, cfg: &ExperimentConfig) -> CliResult<Table> {
    let dim = f.dim();
    let cap = (1usize << 16) as f64;
    let per_axis = cfg
        .grid_resolution
        .min(cap.powf(1.0 / dim as f64).floor() as usize)
        .max(1);
    let grid = generate_nodes(&NodeGenSpec::Equispaced { n: per_axis, dim }, 0).at(|| "evaluation grid".into())?;
    let op = build_operator(&grid, f.degree(), cfg.solver.transform_mode).at(|| "evaluation grid".into())?;
    let values = op.forward(f).at(|| "evaluation grid".into())?;
    let mut header: Vec<String> = (1..=dim).map(|t| format!("x{t}")).collect();
    header.extend(["re".to_string(), "im".to_string()]);
    let mut table = Table { header, rows: Vec::with_capacity(grid.len()) };
    for (x, v) in grid.iter().zip(values.values()) {
        let mut row: Vec<Cell> = x.iter().map(|c| Cell::Real(*c)).collect();
        row.extend([Cell::Real(v.re), Cell::Real(v.im)]);
        table.rows.push(row);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_seeds_differ() {
        let seeds: Vec<u64> = (0..100).map(|i| point_seed(7, i)).collect();
        let mut sorted = seeds.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), 100);
        assert_eq!(point_seed(7, 0), 7);
    }

    #[test]
    fn coefficient_error_pads_with_zeros() {
        let a = SpectralVector::from_values(1, 2, vec![Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)]).unwrap();
        let mut vals = vec![Complex64::new(0.0, 0.0); 4];
        vals[1] = Complex64::new(1.0, 0.0);
        vals[2] = Complex64::new(2.0, 0.0);
        let b = SpectralVector::from_values(1, 4, vals).unwrap();
        assert_eq!(coefficient_error(&a, &b), 0.0);
    }
}
