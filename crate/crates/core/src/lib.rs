//! Scattered data interpolation on the torus by trigonometric polynomials.
//!
//! Given nodes `x_j` in `[-1/2, 1/2)^d` and values `y_j`, find coefficients
//! `f_k`, `k` in `{-N/2, ..., N/2 - 1}^d`, with `sum_k f_k e^{2 pi i k.x_j} = y_j`
//! and smallest damped norm `sum_k |f_k|^2 / w_k`. The damping factors `w_k`
//! define a kernel `K_N`; the conditioning of the interpolation problem is that
//! of the kernel matrix `(K_N(x_j - x_l))`.
//!
//! ```
//! use trigint::prelude::*;
//!
//! let nodes = generate_nodes(&NodeGenSpec::RandomSeparated { m: 20, q: 0.02, dim: 1 }, 7)?;
//! let w = damping_closed(ClosedKernel::Fejer, 128)?;
//! let y = SampleVector::from_real(&(0..20).map(|j| (j as f64).sin()).collect::<Vec<_>>());
//! let f0 = SpectralVector::zeros(1, 128)?;
//! let res = cgne(&nodes, &y, &w, &f0, &SolverConfig::default())?;
//! assert!(res.converged);
//! # Ok::<(), trigint::Error>(())
//! ```

pub mod error;
pub mod geometry;
pub mod grid;
pub mod kernels;
pub mod solver;
pub mod stability;
pub mod transform;
pub mod weights;

pub use error::{Error, Result};

/// The types and functions most programs need.
pub mod prelude {
    pub use crate::error::{Error, Result};
    pub use crate::geometry::{generate_nodes, torus_dist, NodeGenSpec, NodeSet, TorusPoint};
    pub use crate::kernels::{
        decay_profile, kernel_closed_form, kernel_eval, kernel_matrix, kernel_matrix_closed,
        DecaySource, KernelDecay, KernelMatrix,
    };
    pub use crate::solver::{
        apriori_error_bound, cgne, cgnr, weighted_coeff_norm, SolveResult, SolverConfig,
    };
    pub use crate::stability::{
        dense_extremal_eigs, equispaced_closed_bounds, equispaced_eigenvalues, gershgorin_bounds,
        jitter_bounds, separated_bounds, spline_qsep_bounds, EigenBounds, Provenance,
    };
    pub use crate::transform::{
        ndft_adjoint, ndft_forward, nfft_adjoint, nfft_forward, FourierOperator, NfftPlan,
        SampleVector, SpectralVector, TransformMode,
    };
    pub use crate::weights::{
        damping_closed, damping_from_weight, tensorize, ClosedKernel, DampingFactors,
        WeightFunctionSpec,
    };
}
