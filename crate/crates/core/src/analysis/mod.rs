//! Explicit constants of the bi-Lipschitz estimate, matrix norms of sampled
//! Jacobians, Lipschitz scans and the planar counterexample.

pub mod constants;
pub mod counterexample;
pub mod lipschitz;
pub mod matrix;

pub use constants::{alpha0, alpha1, compute_constants, du_at_origin, wilbraham_gibbs, HyperConstants, MU5_FLOOR};
pub use counterexample::{
    counterexample_gradient, counterexample_w0, threshold_radius, trace_lipschitz, w0_terms_for, TraceLipschitz,
    W0Value,
};
pub use lipschitz::{
    grad_bound_check_poisson, lipschitz_scan, lipschitz_scan_pairs, poisson_jacobian, potential_scan, scan_settings,
    try_lipschitz_scan_pairs, Gap, GradBoundReport, GradSample, LipschitzReport, ScanSpec, ScanTarget, StratumStats,
    SHARED_RULE_GAP,
};
pub use matrix::{matrix_norm_and_l, symmetric_eigenvalues, MatrixFrame};
