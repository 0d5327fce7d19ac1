//! Rough per-cell metric fields and the cochain weights they induce.
//!
//! A metric field assigns an SPD matrix to every top cell of a cubical grid.
//! The induced weight of a k-cell σ with axis set I, anchored at the top cell
//! c, is
//!
//! ```text
//! θ(σ) = det[(g_c⁻¹)_{I,I}] · √det(g_c) · vol(c),
//! ```
//!
//! the Gram factor of the coordinate k-form basis times the volume density.
//! For constant metrics this reproduces the L² norm of constant-coefficient
//! forms. Weights are diagonal per degree, hence block-diagonal over the
//! grading, which the graded splitting checks require.
//!
//! Transfer exponent: if two fields satisfy `C⁻²g₂ ⪯ g₁ ⪯ C²g₂` cellwise
//! (Loewner order), then principal k×k minors of the inverses scale by at
//! most `C^{2k}` while `√det` scales by at most `C^n`, so every weight ratio
//! lies in `[C^{−(n+2k)}, C^{n+2k}]` and the induced per-degree mutual bound
//! is at most `C^{(n+2k)/2}`.

mod field;
mod weights;

pub use field::{
    parse_metric_field, sample_metric_field, weierstrass_metric, weierstrass_sum, MetricField,
    PerturbFactor, SamplerConfig, SamplerModel,
};
pub use weights::{
    induce_cell_weights, induce_weights, sample_weight_spec, transfer_bound_check,
    TransferDegree, TransferReport, WeightSpec,
};

pub use field::perturb_metric;

use thiserror::Error;

#[derive(Error, Debug, Clone)]
pub enum MetricFieldError {
    #[error("metric field carrier does not match the complex carrier")]
    CarrierMismatch,

    #[error("perturbation factor is not elliptic: {detail}")]
    FactorNotElliptic { detail: String },

    #[error("metric field text is malformed at line {line}: {message}")]
    ParseError { line: usize, message: String },

    #[error(transparent)]
    Complex(#[from] crate::complexes::ComplexError),

    #[error(transparent)]
    Linops(#[from] crate::linops::LinopsError),
}
