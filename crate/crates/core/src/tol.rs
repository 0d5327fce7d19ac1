//! Central numeric tolerances.
//!
//! Every threshold that enters a certification gate or an invariant check is
//! defined here so the numeric policy can be audited in one place. Scenario
//! files may override the overridable subset (see the CLI crate).

/// Maximum relative entrywise asymmetry `max|B - B^H| / max|B|` tolerated when
/// certifying a Hermitian metric form.
pub const HERMITIAN_ASYMMETRY: f64 = 1e-14;

/// Default nilpotency gate: accept `Γ` when `‖Γ²‖ ≤ tol · max(1, ‖Γ‖²)` in the
/// spectral norm. Exact-integer inputs are checked in integer arithmetic and
/// must square to zero exactly.
pub const NILPOTENCY: f64 = 1e-12;

/// Residual allowed for the nilpotency of a weighted adjoint `B⁻¹Γ*B` of a
/// certified nilpotent `Γ` (one solve and two multiplies of rounding).
pub const ADJOINT_NILPOTENCY: f64 = 1e-10;

/// `‖Q^H B Q - I‖` allowed for a basis claimed B-orthonormal.
pub const ORTHONORMALITY: f64 = 1e-10;

/// A rank decision is clean when the singular values (or pencil eigenvalues)
/// astride the cut differ by at least this ratio; otherwise the result carries
/// a rank-ambiguity warning.
pub const RANK_GAP: f64 = 1e3;

/// Principal cosines at least `1 - PRINCIPAL_COSINE` count as intersection
/// directions.
pub const PRINCIPAL_COSINE: f64 = 1e-10;

/// Columnwise residual allowed when checking that a projector fixes its range
/// and annihilates its nullspace, relative to the column norm.
pub const PROJECTOR_RESIDUAL: f64 = 1e-10;

/// Relative Hermitian defect `‖S - S^H‖ / ‖S‖` allowed for the symmetrized
/// Hodge–Dirac form `S = BΓ + Γ^H B`.
pub const SELF_ADJOINT: f64 = 1e-12;

/// `‖ΦΦ⁻¹ - I‖` and `‖Φ⁻¹Φ - I‖` allowed for a kernel isomorphism pair.
pub const ISOMORPHISM: f64 = 1e-8;

/// `‖[P_j, Π^k]‖ ≤ GRADED_COMMUTATOR · ‖Π‖^k` for a graded splitting check.
pub const GRADED_COMMUTATOR: f64 = 1e-10;

/// Mutual bounds are reflexive and symmetric to this tolerance.
pub const MUTUAL_BOUND_SYMMETRY: f64 = 1e-12;

/// Holonomy defect allowed when certifying a local system flat.
pub const FLATNESS: f64 = 1e-12;

/// Stacked-basis singularity threshold below which two subspaces are declared
/// non-complementary (`σ_min/σ_max` of the stacked basis).
pub const COMPLEMENTARITY: f64 = 1e-12;
