//! Finite-dimensional Hodge theory for nilpotent operators under rough metric
//! weights.
//!
//! The crate is organised around four layers:
//!
//! - [`linops`] — weighted inner-product linear algebra: certified SPD metric
//!   forms, nilpotency gates, weighted adjoints, rank-revealing kernels and
//!   ranges, subspace intersection, oblique projectors and mutual bounds.
//! - [`complexes`] — generators of graded nilpotent operators: simplicial and
//!   cubical cochain complexes, relative subcomplexes, flat local-system
//!   twists, exterior-algebra wedge operators, and the exact integer
//!   Smith-normal-form homology oracle.
//! - [`hodge`] — Hodge–Dirac operators `Π_B = Γ + B⁻¹Γ*B`, Hodge
//!   decompositions, cohomology dimensions, kernel isomorphisms between
//!   operators built from mutually bounded metrics, and graded splittings.
//! - [`roughmetrics`] — samplers for rough per-cell SPD metric fields
//!   (log-Gaussian, lacunar cosine series), induced per-degree cochain
//!   weights, and mutual-bound transfer diagnostics.
//!
//! All scalar arithmetic is complex (`Complex<f64>`); real inputs embed.
//! Every operation is a pure function of immutable inputs, so values can be
//! shared freely across threads.

pub mod complexes;
pub mod hodge;
pub mod linops;
pub mod rng;
pub mod roughmetrics;
pub mod scalar;
pub mod svdx;
pub mod tol;

pub use linops::{
    certify_metric, certify_nilpotent, intersect, kernel, mutual_bound, oblique_projector, range,
    weighted_adjoint, LinopsError, Metric, MetricForm, MutualBound, NilpotentOperator,
    ObliqueProjector, Subspace, TolPolicy,
};

pub use hodge::{
    build_dirac, cohomology_dims, graded_split_check, hodge_decompose, kernel_isomorphism,
    power_kernel_check, restricted_kernel_isomorphism, GradedStructure, HodgeDecomposition,
    HodgeDiracOperator, HodgeError, IsomorphismMode, KernelIsomorphism,
};

pub use complexes::{
    betti_smith, build_cubical, build_simplicial, koszul_wedge, magnet_operator, relative_complex,
    twisted_coboundary, BoundaryMarking, CochainComplex, ComplexError, CubicalGrid, KoszulModel,
    LocalSystem, SimplicialComplex,
};

pub use roughmetrics::{
    induce_weights, perturb_metric, sample_metric_field, sample_weight_spec, transfer_bound_check,
    weierstrass_metric, MetricField, MetricFieldError, SamplerConfig, SamplerModel, WeightSpec,
};
