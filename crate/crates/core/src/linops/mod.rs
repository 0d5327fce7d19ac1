//! Weighted inner-product linear algebra.
//!
//! Everything downstream (Hodge–Dirac assembly, kernel isomorphisms) reduces
//! to the primitives here: certified SPD metric forms, nilpotency gates,
//! weighted adjoints, rank-revealing kernels/ranges with an explicit gap
//! policy, principal-angle subspace intersection, oblique projectors, and
//! mutual bounds computed from Hermitian definite pencils.

mod error;
mod metric;
mod nilpotent;
mod projector;
mod subspace;

pub use error::LinopsError;
pub use metric::{certify_metric, mutual_bound, weighted_adjoint, Metric, MetricForm, MutualBound};
pub use nilpotent::{certify_nilpotent, NilpotentOperator};
pub use projector::{oblique_projector, ObliqueProjector};
pub use subspace::{
    intersect, kernel, max_principal_cosine as subspace_cosine, range, rank_decision,
    RankDecision, Subspace, TolPolicy,
};
