//! Rank-revealing kernels, ranges, and subspace arithmetic.

use super::error::LinopsError;
use super::metric::Metric;
use crate::scalar::{CMat};
use crate::tol;

/// Policy for turning a singular spectrum into a rank.
#[derive(Clone, Debug)]
pub struct TolPolicy {
    /// Absolute cut; `None` uses `max(rows, cols) · ε · σ_max`.
    pub rank_tol: Option<f64>,
    /// Minimum ratio between the smallest retained and largest discarded
    /// value for the decision to count as unambiguous.
    pub gap_requirement: f64,
}

impl Default for TolPolicy {
    fn default() -> Self {
        Self {
            rank_tol: None,
            gap_requirement: tol::RANK_GAP,
        }
    }
}

impl TolPolicy {
    pub fn with_rank_tol(tol: f64) -> Self {
        Self {
            rank_tol: Some(tol),
            ..Self::default()
        }
    }
}

/// Outcome of a rank decision on a nonnegative spectrum sorted descending.
#[derive(Clone, Debug)]
pub struct RankDecision {
    pub rank: usize,
    pub tol_used: f64,
    /// `σ_rank / σ_{rank+1}`; infinite when either side is empty.
    pub gap: f64,
    pub ambiguous: bool,
}

/// Decide the rank of a nonnegative spectrum under a policy. `scale_rows` and
/// `scale_cols` size the default cut.
pub fn rank_decision(
    spectrum: &[f64],
    scale_rows: usize,
    scale_cols: usize,
    policy: &TolPolicy,
) -> RankDecision {
    let mut vals: Vec<f64> = spectrum.to_vec();
    vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let sigma_max = vals.first().copied().unwrap_or(0.0);
    let cut = policy
        .rank_tol
        .unwrap_or_else(|| scale_rows.max(scale_cols) as f64 * f64::EPSILON * sigma_max);
    let rank = vals.iter().take_while(|&&s| s > cut).count();
    let gap = if rank == 0 || rank == vals.len() {
        f64::INFINITY
    } else {
        let below = vals[rank];
        if below == 0.0 {
            f64::INFINITY
        } else {
            vals[rank - 1] / below
        }
    };
    RankDecision {
        rank,
        tol_used: cut,
        gap,
        ambiguous: gap < policy.gap_requirement,
    }
}

/// A subspace held as a B-orthonormal basis.
///
/// Rank-ambiguous decisions are carried as a warning flag rather than an
/// error, so a caller can still inspect the basis while knowing the dimension
/// is suspect.
#[derive(Clone, Debug)]
pub struct Subspace {
    ambient_dim: usize,
    basis: CMat,
    metric: Metric,
    tol_used: f64,
    singular_gap: f64,
    rank_ambiguous: bool,
}

impl Subspace {
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &CMat {
        &self.basis
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn tol_used(&self) -> f64 {
        self.tol_used
    }

    pub fn singular_gap(&self) -> f64 {
        self.singular_gap
    }

    pub fn rank_ambiguous(&self) -> bool {
        self.rank_ambiguous
    }

    /// Wrap an already B-orthonormal basis.
    pub fn from_orthonormal_basis(basis: CMat, metric: Metric) -> Self {
        Self {
            ambient_dim: basis.nrows(),
            basis,
            metric,
            tol_used: 0.0,
            singular_gap: f64::INFINITY,
            rank_ambiguous: false,
        }
    }

    /// B-orthonormalize a full-column-rank spanning set.
    pub fn from_spanning_set(span: &CMat, metric: Metric) -> Self {
        let basis = metric.orthonormalize(span);
        Self::from_orthonormal_basis(basis, metric)
    }

    /// Attach the rank-decision provenance to a subspace.
    pub fn with_decision(self, tol_used: f64, singular_gap: f64, rank_ambiguous: bool) -> Self {
        Self {
            tol_used,
            singular_gap,
            rank_ambiguous,
            ..self
        }
    }
}

/// Kernel of `a` as a subspace of the domain, orthonormal for `metric`.
pub fn kernel(a: &CMat, metric: &Metric, policy: &TolPolicy) -> Result<Subspace, LinopsError> {
    if metric.dim() != a.ncols() {
        return Err(LinopsError::DimensionMismatch(format!(
            "kernel of {}x{} lives in dim {}, metric has dim {}",
            a.nrows(),
            a.ncols(),
            a.ncols(),
            metric.dim()
        )));
    }
    let svd = crate::svdx::jacobi_svd(a);
    let vt = &svd.vt;
    let decision = rank_decision(&svd.singular_values, a.nrows(), a.ncols(), policy);
    let null_dim = a.ncols() - decision.rank;
    let mut span = CMat::zeros(a.ncols(), null_dim);
    for (out_col, row) in (decision.rank..vt.nrows().min(a.ncols())).enumerate() {
        for j in 0..a.ncols() {
            span[(j, out_col)] = vt[(row, j)].conj();
        }
    }
    // Right singular vectors beyond min(rows, cols) are an orthonormal
    // completion only when the SVD is full; nalgebra's is thin, so fill the
    // remainder from the orthogonal complement when rows < cols.
    if vt.nrows() < a.ncols() {
        let have = vt.nrows() - decision.rank;
        let missing = null_dim - have;
        if missing > 0 {
            let complement = orthonormal_complement(&vt.adjoint(), a.ncols());
            for k in 0..missing {
                for j in 0..a.ncols() {
                    span[(j, have + k)] = complement[(j, k)];
                }
            }
        }
    }
    let basis = metric.orthonormalize(&span);
    Ok(Subspace {
        ambient_dim: a.ncols(),
        basis,
        metric: metric.clone(),
        tol_used: decision.tol_used,
        singular_gap: decision.gap,
        rank_ambiguous: decision.ambiguous,
    })
}

/// Range (column space) of `a` as a subspace of the codomain.
pub fn range(a: &CMat, metric: &Metric, policy: &TolPolicy) -> Result<Subspace, LinopsError> {
    if metric.dim() != a.nrows() {
        return Err(LinopsError::DimensionMismatch(format!(
            "range of {}x{} lives in dim {}, metric has dim {}",
            a.nrows(),
            a.ncols(),
            a.nrows(),
            metric.dim()
        )));
    }
    let svd = crate::svdx::jacobi_svd(a);
    let decision = rank_decision(&svd.singular_values, a.nrows(), a.ncols(), policy);
    let span = svd.u.columns(0, decision.rank).into_owned();
    let basis = metric.orthonormalize(&span);
    Ok(Subspace {
        ambient_dim: a.nrows(),
        basis,
        metric: metric.clone(),
        tol_used: decision.tol_used,
        singular_gap: decision.gap,
        rank_ambiguous: decision.ambiguous,
    })
}

/// Orthonormal basis of the orthogonal complement of the columns of `q`
/// (assumed orthonormal) in `C^n`, via projection of the coordinate frame.
fn orthonormal_complement(q: &CMat, n: usize) -> CMat {
    let mut residuals = CMat::identity(n, n);
    if q.ncols() > 0 {
        residuals -= q * q.adjoint();
    }
    let svd = crate::svdx::jacobi_svd(&residuals);
    let keep = svd
        .singular_values
        .iter()
        .take_while(|&&s| s > 0.5)
        .count();
    svd.u.columns(0, keep).into_owned()
}

/// Intersection of two subspaces over the same metric, via principal angles.
///
/// The dimension is the count of principal cosines at or above
/// `1 - PRINCIPAL_COSINE`; the returned basis is B-orthonormal.
pub fn intersect(s1: &Subspace, s2: &Subspace) -> Result<Subspace, LinopsError> {
    if s1.ambient_dim() != s2.ambient_dim() {
        return Err(LinopsError::DimensionMismatch(format!(
            "intersection needs equal ambient dims, got {} and {}",
            s1.ambient_dim(),
            s2.ambient_dim()
        )));
    }
    if !s1.metric().same_as(s2.metric()) {
        return Err(LinopsError::MetricMismatch);
    }
    let metric = s1.metric().clone();
    if s1.dim() == 0 || s2.dim() == 0 {
        return Ok(Subspace::from_orthonormal_basis(
            CMat::zeros(s1.ambient_dim(), 0),
            metric,
        ));
    }
    let m = s1.basis().adjoint() * metric.apply(s2.basis());
    let svd = crate::svdx::jacobi_svd(&m);
    let count = svd
        .singular_values
        .iter()
        .take_while(|&&s| s >= 1.0 - tol::PRINCIPAL_COSINE)
        .count();
    let span = s1.basis() * svd.u.columns(0, count).into_owned();
    Ok(Subspace {
        ambient_dim: s1.ambient_dim(),
        basis: metric.orthonormalize(&span),
        metric,
        tol_used: tol::PRINCIPAL_COSINE,
        singular_gap: f64::INFINITY,
        rank_ambiguous: false,
    })
}

/// Largest principal cosine between two subspaces (0 when either is trivial).
pub fn max_principal_cosine(s1: &Subspace, s2: &Subspace) -> f64 {
    if s1.dim() == 0 || s2.dim() == 0 {
        return 0.0;
    }
    let metric = s1.metric();
    let m = s1.basis().adjoint() * metric.apply(s2.basis());
    crate::scalar::spectral_norm(&m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linops::metric::{certify_metric, MetricForm};
    use crate::rng::SplitMix64;
    use crate::scalar::{c, cmat_from_rows, cr, max_abs};

    #[test]
    fn path_graph_kernel_is_constants() {
        let d0 = cmat_from_rows(&[&[-1.0, 1.0]]);
        let id2 = MetricForm::identity(2);
        let ker = kernel(&d0, &id2, &TolPolicy::default()).unwrap();
        assert_eq!(ker.dim(), 1);
        assert!(!ker.rank_ambiguous());
        let b = ker.basis();
        let ratio = b[(0, 0)] / b[(1, 0)];
        assert!((ratio - cr(1.0)).norm() < 1e-12);
        assert!((b[(0, 0)].norm() - 1.0 / 2.0f64.sqrt()).abs() < 1e-12);

        let id1 = MetricForm::identity(1);
        let ran = range(&d0, &id1, &TolPolicy::default()).unwrap();
        assert_eq!(ran.dim(), 1);
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let z = CMat::zeros(4, 4);
        let id = MetricForm::identity(4);
        let ker = kernel(&z, &id, &TolPolicy::default()).unwrap();
        assert_eq!(ker.dim(), 4);
        let ran = range(&z, &id, &TolPolicy::default()).unwrap();
        assert_eq!(ran.dim(), 0);
    }

    #[test]
    fn wide_matrix_kernel_completes_basis() {
        // 1x3 matrix: thin SVD only returns one right vector, the kernel is
        // 2-dimensional and must still come out orthonormal.
        let a = cmat_from_rows(&[&[1.0, 1.0, 1.0]]);
        let id = MetricForm::identity(3);
        let ker = kernel(&a, &id, &TolPolicy::default()).unwrap();
        assert_eq!(ker.dim(), 2);
        assert!(id.orthonormality_defect(ker.basis()) < 1e-12);
        assert!(max_abs(&(&a * ker.basis())) < 1e-12);
    }

    #[test]
    fn rank_nullity_exact_on_random_matrices() {
        let mut rng = SplitMix64::new(13);
        for _ in 0..20 {
            let rows = 2 + (rng.next_u64() % 5) as usize;
            let cols = 2 + (rng.next_u64() % 5) as usize;
            let a = CMat::from_fn(rows, cols, |_, _| c(rng.next_normal(), rng.next_normal()));
            let bd = MetricForm::identity(cols);
            let bc = MetricForm::identity(rows);
            let ker = kernel(&a, &bd, &TolPolicy::default()).unwrap();
            let ran = range(&a, &bc, &TolPolicy::default()).unwrap();
            if !ker.rank_ambiguous() && !ran.rank_ambiguous() {
                assert_eq!(ker.dim() + ran.dim(), cols);
            }
        }
    }

    #[test]
    fn ambiguous_rank_is_flagged() {
        let a = cmat_from_rows(&[&[1.0, 0.0], &[0.0, 1e-14]]);
        let id = MetricForm::identity(2);
        let policy = TolPolicy {
            rank_tol: Some(1e-10),
            gap_requirement: 1e30,
        };
        let ker = kernel(&a, &id, &policy).unwrap();
        assert!(ker.rank_ambiguous());
    }

    #[test]
    fn intersection_of_coordinate_planes() {
        let id = MetricForm::identity(3);
        let e12 = Subspace::from_orthonormal_basis(
            cmat_from_rows(&[&[1.0, 0.0], &[0.0, 1.0], &[0.0, 0.0]]),
            id.clone(),
        );
        let e23 = Subspace::from_orthonormal_basis(
            cmat_from_rows(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]),
            id.clone(),
        );
        let cap = intersect(&e12, &e23).unwrap();
        assert_eq!(cap.dim(), 1);
        assert!(cap.basis()[(0, 0)].norm() < 1e-10);
        assert!((cap.basis()[(1, 0)].norm() - 1.0).abs() < 1e-10);
        assert!(cap.basis()[(2, 0)].norm() < 1e-10);
    }

    #[test]
    fn self_intersection_preserves_dimension() {
        let mut rng = SplitMix64::new(2);
        let g = CMat::from_fn(4, 4, |_, _| c(rng.next_normal(), rng.next_normal()));
        let b = certify_metric(&(&g * g.adjoint() + CMat::identity(4, 4))).unwrap();
        let span = CMat::from_fn(4, 2, |_, _| c(rng.next_normal(), rng.next_normal()));
        let s = Subspace::from_spanning_set(&span, b);
        let cap = intersect(&s, &s).unwrap();
        assert_eq!(cap.dim(), s.dim());
    }

    #[test]
    fn cycle_coboundary_rank_matches_integer_oracle() {
        let sc = crate::complexes::cycle(3);
        let d0 = sc.coboundary(0);
        let exact_rank = crate::complexes::integer_rank(&d0);
        assert_eq!(exact_rank, 2);
        let dense = d0.to_dense();
        let id3 = MetricForm::identity(3);
        let ker = kernel(&dense, &id3, &TolPolicy::default()).unwrap();
        let ran = range(&dense, &id3, &TolPolicy::default()).unwrap();
        assert_eq!(ker.dim(), 3 - exact_rank);
        assert_eq!(ran.dim(), exact_rank);
    }

    #[test]
    fn metric_mismatch_rejected() {
        let b1 = MetricForm::identity(2);
        let b2 = certify_metric(&cmat_from_rows(&[&[2.0, 0.0], &[0.0, 1.0]])).unwrap();
        let s1 = Subspace::from_orthonormal_basis(cmat_from_rows(&[&[1.0], &[0.0]]), b1);
        let s2 = Subspace::from_orthonormal_basis(cmat_from_rows(&[&[0.0], &[1.0]]), b2);
        assert!(matches!(intersect(&s1, &s2), Err(LinopsError::MetricMismatch)));
    }
}
