//! `key = value` experiment configs.
//!
//! ```text
//! # condition numbers on the equispaced grid
//! experiment = cond-vs-degree
//! kernel = dirichlet, fejer
//! nodes = equispaced(100)
//! degrees = 100:600:100
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use trigint::geometry::NodeGenSpec;
use trigint::kernels::{decay_profile, DecaySource, KernelDecay};
use trigint::solver::SolverConfig;
use trigint::transform::TransformMode;
use trigint::weights::{
    damping_closed, damping_from_weight, tensorize, ClosedKernel, DampingFactors,
    WeightFunctionSpec,
};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    CondVsDegree,
    JitterSweep,
    ErrorDecay,
    Reconstruct,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::CondVsDegree => "cond-vs-degree",
            ExperimentKind::JitterSweep => "jitter-sweep",
            ExperimentKind::ErrorDecay => "error-decay",
            ExperimentKind::Reconstruct => "reconstruct",
        }
    }
}

impl FromStr for ExperimentKind {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "cond-vs-degree" => Ok(ExperimentKind::CondVsDegree),
            "jitter-sweep" => Ok(ExperimentKind::JitterSweep),
            "error-decay" => Ok(ExperimentKind::ErrorDecay),
            "reconstruct" => Ok(ExperimentKind::Reconstruct),
            other => Err(CliError::Config(format!("unknown experiment '{other}'"))),
        }
    }
}

/// A kernel family; the degree is supplied per sweep point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpec {
    Dirichlet,
    Fejer,
    /// Jackson kernel of even `order`; `sigma` follows from the degree.
    Jackson { order: u32 },
    Weight(WeightFunctionSpec),
}

impl KernelSpec {
    /// The closed-form kernel at `degree`, if this family has one.
    pub fn closed(&self, degree: usize) -> trigint::Result<Option<ClosedKernel>> {
        Ok(match *self {
            KernelSpec::Dirichlet => Some(ClosedKernel::Dirichlet),
            KernelSpec::Fejer => Some(ClosedKernel::Fejer),
            KernelSpec::Jackson { order } => {
                let o = order as usize;
                if o == 0 || degree < 2 || (degree - 2) % o != 0 {
                    return Err(trigint::Error::InvalidParameter {
                        name: "degree",
                        reason: format!("Jackson order {order} needs N = {order}(sigma - 1) + 2"),
                    });
                }
                Some(ClosedKernel::Jackson {
                    order,
                    sigma: ((degree - 2) / o + 1) as u32,
                })
            }
            KernelSpec::Weight(_) => None,
        })
    }

    /// Tensor-product damping factors at `degree` in dimension `dim`.
    pub fn damping(&self, degree: usize, dim: usize) -> trigint::Result<DampingFactors> {
        let base = match (self.closed(degree)?, self) {
            (Some(kind), _) => damping_closed(kind, degree)?,
            (None, KernelSpec::Weight(spec)) => damping_from_weight(spec, degree)?,
            (None, _) => unreachable!("closed kernels always resolve"),
        };
        if dim == 1 {
            Ok(base)
        } else {
            tensorize(&base, dim)
        }
    }

    /// Localisation certificate, measured at `degree` when no proven one exists.
    pub fn decay(&self, degree: usize) -> Option<KernelDecay> {
        let source = match (self.closed(degree).ok().flatten(), self) {
            (Some(kind), _) => DecaySource::Closed(kind),
            (None, KernelSpec::Weight(spec @ WeightFunctionSpec::Sobolev { .. })) => {
                DecaySource::Empirical {
                    spec: *spec,
                    degree,
                }
            }
            (None, KernelSpec::Weight(spec)) => DecaySource::Weight(*spec),
            (None, _) => return None,
        };
        decay_profile(&source).ok()
    }
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelSpec::Dirichlet => write!(f, "dirichlet"),
            KernelSpec::Fejer => write!(f, "fejer"),
            KernelSpec::Jackson { order } => write!(f, "jackson({order})"),
            KernelSpec::Weight(WeightFunctionSpec::TopHat) => write!(f, "tophat"),
            KernelSpec::Weight(WeightFunctionSpec::Hat) => write!(f, "hat"),
            KernelSpec::Weight(WeightFunctionSpec::BSpline { order }) => write!(f, "bspline({order})"),
            KernelSpec::Weight(WeightFunctionSpec::Sobolev {
                alpha,
                order,
                gamma,
            }) => write!(f, "sobolev({alpha},{order},{gamma})"),
        }
    }
}

/// Splits `name(a, b)` into `("name", ["a", "b"])`.
fn call(token: &str) -> CliResult<(String, Vec<String>)> {
    let token = token.trim();
    match token.find('(') {
        None => Ok((token.to_string(), Vec::new())),
        Some(open) => {
            let inner = token[open + 1..]
                .strip_suffix(')')
                .ok_or_else(|| CliError::Config(format!("missing ')' in '{token}'")))?;
            let args = inner
                .split(',')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect();
            Ok((token[..open].trim().to_string(), args))
        }
    }
}

fn num<T: FromStr>(s: &str, what: &str) -> CliResult<T> {
    s.trim()
        .parse()
        .map_err(|_| CliError::Config(format!("{what}: cannot parse '{s}'")))
}

fn arity(name: &str, args: &[String], allowed: &[usize]) -> CliResult<()> {
    if allowed.contains(&args.len()) {
        Ok(())
    } else {
        Err(CliError::Config(format!(
            "'{name}' takes {allowed:?} arguments, got {}",
            args.len()
        )))
    }
}

impl FromStr for KernelSpec {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        let (name, args) = call(s)?;
        let spec = match name.as_str() {
            "dirichlet" => {
                arity(&name, &args, &[0])?;
                KernelSpec::Dirichlet
            }
            "fejer" => {
                arity(&name, &args, &[0])?;
                KernelSpec::Fejer
            }
            "jackson" => {
                arity(&name, &args, &[1])?;
                KernelSpec::Jackson {
                    order: num(&args[0], "jackson order")?,
                }
            }
            "tophat" => {
                arity(&name, &args, &[0])?;
                KernelSpec::Weight(WeightFunctionSpec::TopHat)
            }
            "hat" => {
                arity(&name, &args, &[0])?;
                KernelSpec::Weight(WeightFunctionSpec::Hat)
            }
            "bspline" => {
                arity(&name, &args, &[1])?;
                KernelSpec::Weight(WeightFunctionSpec::BSpline {
                    order: num(&args[0], "bspline order")?,
                })
            }
            "sobolev" => {
                arity(&name, &args, &[3])?;
                KernelSpec::Weight(WeightFunctionSpec::Sobolev {
                    alpha: num(&args[0], "sobolev alpha")?,
                    order: num(&args[1], "sobolev order")?,
                    gamma: num(&args[2], "sobolev gamma")?,
                })
            }
            other => return Err(CliError::Config(format!("unknown kernel '{other}'"))),
        };
        if let KernelSpec::Weight(w) = &spec {
            w.validate().map_err(|e| CliError::Config(e.to_string()))?;
        }
        if let KernelSpec::Jackson { order } = spec {
            if order == 0 || order % 2 != 0 {
                return Err(CliError::Config(format!("Jackson order must be even, got {order}")));
            }
        }
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NodeSource {
    Generated(NodeGenSpec),
    File { path: PathBuf, dim: usize },
}

impl NodeSource {
    pub fn dim(&self) -> usize {
        match self {
            NodeSource::Generated(NodeGenSpec::Equispaced { dim, .. })
            | NodeSource::Generated(NodeGenSpec::RandomSeparated { dim, .. })
            | NodeSource::Generated(NodeGenSpec::Uniform { dim, .. })
            | NodeSource::File { dim, .. } => *dim,
            NodeSource::Generated(NodeGenSpec::Jittered { .. }) => 1,
        }
    }
}

impl FromStr for NodeSource {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        let (name, args) = call(s)?;
        let spec = match name.as_str() {
            "equispaced" => {
                arity(&name, &args, &[1, 2])?;
                NodeGenSpec::Equispaced {
                    n: num(&args[0], "equispaced n")?,
                    dim: args.get(1).map_or(Ok(1), |a| num(a, "equispaced dim"))?,
                }
            }
            "jittered" => {
                arity(&name, &args, &[2])?;
                NodeGenSpec::Jittered {
                    m: num(&args[0], "jittered m")?,
                    epsilon: num(&args[1], "jittered epsilon")?,
                }
            }
            "separated" => {
                arity(&name, &args, &[2, 3])?;
                NodeGenSpec::RandomSeparated {
                    m: num(&args[0], "separated m")?,
                    q: num(&args[1], "separated q")?,
                    dim: args.get(2).map_or(Ok(1), |a| num(a, "separated dim"))?,
                }
            }
            "uniform" => {
                arity(&name, &args, &[1, 2])?;
                NodeGenSpec::Uniform {
                    m: num(&args[0], "uniform m")?,
                    dim: args.get(1).map_or(Ok(1), |a| num(a, "uniform dim"))?,
                }
            }
            "file" => {
                arity(&name, &args, &[1, 2])?;
                return Ok(NodeSource::File {
                    path: PathBuf::from(&args[0]),
                    dim: args.get(1).map_or(Ok(1), |a| num(a, "file dim"))?,
                });
            }
            other => return Err(CliError::Config(format!("unknown node source '{other}'"))),
        };
        Ok(NodeSource::Generated(spec))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    None,
    BoundingBox,
}

impl FromStr for Normalization {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s.trim() {
            "none" => Ok(Normalization::None),
            "bounding-box" => Ok(Normalization::BoundingBox),
            other => Err(CliError::Config(format!("unknown normalization '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DatasetSource {
    /// Clustered samples of a known bivariate polynomial.
    Synthetic { m: usize },
    File {
        path: PathBuf,
        dim: usize,
        normalization: Normalization,
    },
}

/// Everything one experiment run needs.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub kernels: Vec<KernelSpec>,
    pub nodes: NodeSource,
    pub degrees: Vec<usize>,
    pub solver: SolverConfig,
    pub seed: u64,
    pub output: PathBuf,
    /// Cross-validation holdout size (reconstruct).
    pub holdout: usize,
    /// Node counts of the jitter sweep.
    pub sizes: Vec<usize>,
    pub reruns: usize,
    pub jitter: f64,
    /// `N = degree_factor * M` in the jitter sweep.
    pub degree_factor: usize,
    pub dataset: DatasetSource,
    /// Points per axis of the reconstruct evaluation grid.
    pub grid_resolution: usize,
}

fn range_list(s: &str, what: &str) -> CliResult<Vec<usize>> {
    let s = s.trim();
    if let Some((a, rest)) = s.split_once(':') {
        let (b, step) = rest.split_once(':').unwrap_or((rest, "1"));
        let (a, b, step): (usize, usize, usize) = (num(a, what)?, num(b, what)?, num(step, what)?);
        if step == 0 || a > b {
            return Err(CliError::Config(format!("{what}: bad range '{s}'")));
        }
        return Ok((a..=b).step_by(step).collect());
    }
    s.split(',').map(|t| num(t, what)).collect()
}

/// Splits on commas outside parentheses.
fn split_top(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out.into_iter().filter(|t| !t.is_empty()).collect()
}

fn transform_mode(s: &str) -> CliResult<TransformMode> {
    let (name, args) = call(s)?;
    match name.as_str() {
        "direct" => Ok(TransformMode::Direct),
        "auto" => Ok(TransformMode::Auto),
        "fast" => {
            arity(&name, &args, &[0, 1])?;
            Ok(TransformMode::Fast {
                epsilon: args.first().map_or(Ok(1e-12), |a| num(a, "fast epsilon"))?,
            })
        }
        other => Err(CliError::Config(format!("unknown transform '{other}'"))),
    }
}

impl ExperimentConfig {
    /// Defaults mirroring the published experiment setups.
    pub fn defaults(experiment: ExperimentKind) -> Self {
        let base = Self {
            experiment,
            kernels: vec![KernelSpec::Dirichlet, KernelSpec::Fejer],
            nodes: NodeSource::Generated(NodeGenSpec::Equispaced { n: 100, dim: 1 }),
            degrees: (100..=600).step_by(100).collect(),
            solver: SolverConfig::default(),
            seed: 0,
            output: PathBuf::from(format!("{}.csv", experiment.name())),
            holdout: 200,
            sizes: (10..=100).step_by(10).collect(),
            reruns: 100,
            jitter: 0.1,
            degree_factor: 6,
            dataset: DatasetSource::Synthetic { m: 2000 },
            grid_resolution: 256,
        };
        match experiment {
            ExperimentKind::CondVsDegree => base,
            ExperimentKind::JitterSweep => Self {
                kernels: vec![KernelSpec::Fejer, KernelSpec::Dirichlet],
                ..base
            },
            ExperimentKind::ErrorDecay => Self {
                kernels: vec![
                    KernelSpec::Fejer,
                    KernelSpec::Weight(WeightFunctionSpec::BSpline { order: 4 }),
                ],
                nodes: NodeSource::Generated(NodeGenSpec::RandomSeparated {
                    m: 100,
                    q: 4e-3,
                    dim: 1,
                }),
                degrees: vec![1000],
                solver: SolverConfig {
                    max_iterations: 30,
                    residual_tolerance: 1e-14,
                    transform_mode: TransformMode::Direct,
                    record_history: true,
                },
                ..base
            },
            ExperimentKind::Reconstruct => Self {
                kernels: vec![KernelSpec::Weight(WeightFunctionSpec::Sobolev {
                    alpha: 0.5,
                    order: 3,
                    gamma: 1e-3,
                })],
                degrees: vec![64, 128],
                solver: SolverConfig {
                    max_iterations: 40,
                    residual_tolerance: 1e-14,
                    transform_mode: TransformMode::Auto,
                    record_history: true,
                },
                ..base
            },
        }
    }

    /// Parses a config. `expected` is the subcommand, which must agree with
    /// an `experiment` key when both are present.
    pub fn parse(text: &str, expected: Option<ExperimentKind>) -> CliResult<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", i + 1)))?;
            let key = key.trim().to_string();
            if entries.insert(key.clone(), (i + 1, value.trim().to_string())).is_some() {
                return Err(CliError::Config(format!("line {}: duplicate key '{key}'", i + 1)));
            }
        }
        let named = match entries.remove("experiment") {
            Some((_, v)) => Some(v.parse::<ExperimentKind>()?),
            None => None,
        };
        let experiment = match (named, expected) {
            (Some(a), Some(b)) if a != b => {
                return Err(CliError::Config(format!(
                    "config is for '{}' but '{}' was requested",
                    a.name(),
                    b.name()
                )))
            }
            (Some(a), _) | (None, Some(a)) => a,
            (None, None) => return Err(CliError::Config("no experiment given".into())),
        };
        let mut cfg = Self::defaults(experiment);
        for (key, (line, value)) in entries {
            cfg.apply(&key, &value)
                .map_err(|e| CliError::Config(format!("line {line}: {e}")))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path, expected: Option<ExperimentKind>) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text, expected)
    }

    fn apply(&mut self, key: &str, value: &str) -> CliResult<()> {
        match key {
            "seed" => self.seed = num(value, key)?,
            "output" => self.output = PathBuf::from(value),
            "kernel" | "kernels" => {
                self.kernels = split_top(value)
                    .into_iter()
                    .map(str::parse)
                    .collect::<CliResult<_>>()?
            }
            "nodes" => self.nodes = value.parse()?,
            "degree" | "degrees" => self.degrees = range_list(value, key)?,
            "solver.max_iterations" => self.solver.max_iterations = num(value, key)?,
            "solver.tolerance" => self.solver.residual_tolerance = num(value, key)?,
            "solver.transform" => self.solver.transform_mode = transform_mode(value)?,
            "holdout" => self.holdout = num(value, key)?,
            "sizes" => self.sizes = range_list(value, key)?,
            "reruns" => self.reruns = num(value, key)?,
            "jitter" => self.jitter = num(value, key)?,
            "degree_factor" => self.degree_factor = num(value, key)?,
            "grid_resolution" => self.grid_resolution = num(value, key)?,
            "dataset" => {
                let (name, args) = call(value)?;
                self.dataset = match name.as_str() {
                    "synthetic" => {
                        arity(&name, &args, &[0, 1])?;
                        DatasetSource::Synthetic {
                            m: args.first().map_or(Ok(2000), |a| num(a, "synthetic m"))?,
                        }
                    }
                    "file" => {
                        arity(&name, &args, &[1, 2, 3])?;
                        DatasetSource::File {
                            path: PathBuf::from(&args[0]),
                            dim: args.get(1).map_or(Ok(2), |a| num(a, "file dim"))?,
                            normalization: args
                                .get(2)
                                .map_or(Ok(Normalization::BoundingBox), |a| a.parse())?,
                        }
                    }
                    other => return Err(CliError::Config(format!("unknown dataset '{other}'"))),
                }
            }
            other => return Err(CliError::Config(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> CliResult<()> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.kernels.is_empty() {
            return bad("at least one kernel is required".into());
        }
        if self.degrees.is_empty() {
            return bad("at least one degree is required".into());
        }
        if let Some(n) = self.degrees.iter().find(|n| **n == 0 || **n % 2 != 0) {
            return bad(format!("degree {n} must be even and positive"));
        }
        self.solver
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        if let NodeSource::File { path, .. } = &self.nodes {
            if !path.exists() {
                return bad(format!("node file {} does not exist", path.display()));
            }
        }
        if let DatasetSource::File { path, .. } = &self.dataset {
            if self.experiment == ExperimentKind::Reconstruct && !path.exists() {
                return bad(format!("dataset {} does not exist", path.display()));
            }
        }
        if !(0.0..1.0).contains(&self.jitter) {
            return bad(format!("jitter {} not in [0, 1)", self.jitter));
        }
        if self.experiment == ExperimentKind::JitterSweep {
            if self.sizes.iter().any(|m| *m < 2) || self.sizes.is_empty() {
                return bad("jitter sizes must be at least 2".into());
            }
            if self.reruns == 0 || self.degree_factor == 0 {
                return bad("reruns and degree_factor must be positive".into());
            }
        }
        if self.grid_resolution == 0 {
            return bad("grid_resolution must be positive".into());
        }
        Ok(())
    }
}
