//! Hodge–Dirac operators, Hodge decompositions, and kernel isomorphisms.

mod dirac;
mod grading;
mod isomorphism;

pub use dirac::{
    build_dirac, cohomology_dims, graph_norm_defect, hodge_decompose, pi_norm,
    power_kernel_check, HodgeDecomposition, HodgeDiracOperator, PowerKernelReport,
};
pub use grading::GradedStructure;
pub use isomorphism::{
    decomposition_orthogonality_defect, graded_kernel_dims, graded_split_check,
    kernel_isomorphism, kernel_isomorphism_of_ops, restricted_kernel_isomorphism,
    IsomorphismMode, KernelIsomorphism, SplitCheckReport,
};

use thiserror::Error;

#[derive(Error, Debug, Clone)]
pub enum HodgeError {
    #[error(transparent)]
    Linops(#[from] crate::linops::LinopsError),

    #[error("operator does not respect the grading: {detail}")]
    GradingViolation { detail: String },

    #[error("kernel dimensions differ ({left} vs {right}); isomorphism impossible at this rank decision")]
    DimMismatchKernel { left: usize, right: usize },

    #[error("graded split check failed at degree {degree}: commutator residual {residual:e} exceeds {threshold:e}")]
    SplitCheckFailed {
        degree: usize,
        residual: f64,
        threshold: f64,
    },
}

#[cfg(test)]
mod tests;
