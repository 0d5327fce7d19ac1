//! Certified SPD weight forms and the weighted adjoint.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use nalgebra::linalg::{Cholesky, SymmetricEigen};
use nalgebra::Dyn;

use super::error::LinopsError;
use crate::scalar::{hermitian_defect, hermitize, max_abs, CMat, CVec, Scalar};
use crate::tol;

static NEXT_METRIC_ID: AtomicU64 = AtomicU64::new(1);

/// Shared handle to a certified metric form.
pub type Metric = Arc<MetricForm>;

/// An SPD weight form `B` defining the inner product `⟨u,v⟩_B = ⟨Bu,v⟩`,
/// together with its Cholesky factorization `B = L L^H` and extreme
/// eigenvalues.
#[derive(Clone, Debug)]
pub struct MetricForm {
    id: u64,
    dim: usize,
    form: CMat,
    chol_l: CMat,
    lambda_min: f64,
    lambda_max: f64,
}

impl MetricForm {
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMat {
        &self.form
    }

    pub fn lambda_min(&self) -> f64 {
        self.lambda_min
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambda_max
    }

    /// Lower Cholesky factor `L` with `B = L L^H`.
    pub fn chol_l(&self) -> &CMat {
        &self.chol_l
    }

    /// `B · m`.
    pub fn apply(&self, m: &CMat) -> CMat {
        &self.form * m
    }

    /// `B⁻¹ · m` via the cached factorization.
    pub fn solve(&self, m: &CMat) -> CMat {
        let y = self
            .chol_l
            .solve_lower_triangular(m)
            .expect("Cholesky factor is nonsingular");
        self.chol_l
            .adjoint()
            .solve_upper_triangular(&y)
            .expect("Cholesky factor is nonsingular")
    }

    /// `⟨u,v⟩_B = ⟨Bu,v⟩`.
    pub fn inner(&self, u: &CVec, v: &CVec) -> Scalar {
        let bu = &self.form * u;
        let mut acc = Scalar::new(0.0, 0.0);
        for i in 0..v.len() {
            acc += bu[i] * v[i].conj();
        }
        acc
    }

    /// `|u|_B`.
    pub fn norm(&self, u: &CVec) -> f64 {
        self.inner(u, u).re.max(0.0).sqrt()
    }

    /// B-orthonormal basis spanning the columns of `m` (assumed full column
    /// rank). Orthonormalization happens in the Cholesky-transformed frame
    /// `u ↦ L^H u`, so the only decomposition used is a standard SVD.
    pub fn orthonormalize(&self, m: &CMat) -> CMat {
        if m.ncols() == 0 {
            return CMat::zeros(self.dim, 0);
        }
        let w = self.chol_l.adjoint() * m;
        let svd = crate::svdx::jacobi_svd(&w);
        let q = svd.u.columns(0, m.ncols()).into_owned();
        self.chol_l
            .adjoint()
            .solve_upper_triangular(&q)
            .expect("Cholesky factor is nonsingular")
    }

    /// `‖Q^H B Q - I‖_max` for a claimed B-orthonormal basis.
    pub fn orthonormality_defect(&self, q: &CMat) -> f64 {
        if q.ncols() == 0 {
            return 0.0;
        }
        let gram = q.adjoint() * &self.form * q;
        max_abs(&(gram - CMat::identity(q.ncols(), q.ncols())))
    }

    /// The identity metric on `C^dim`.
    pub fn identity(dim: usize) -> Metric {
        certify_metric(&CMat::identity(dim, dim)).expect("identity is SPD")
    }

    /// Two metric forms agree when they are the same certified instance or
    /// have bitwise equal matrices.
    pub fn same_as(&self, other: &MetricForm) -> bool {
        self.id == other.id || (self.dim == other.dim && self.form == other.form)
    }
}

/// Validate a Hermitian positive-definite weight form.
///
/// The stored form is the exactly hermitized `(B + B^H)/2`; positivity is
/// certified by a successful Cholesky factorization and a positive smallest
/// eigenvalue.
pub fn certify_metric(b: &CMat) -> Result<Metric, LinopsError> {
    if b.nrows() != b.ncols() || b.nrows() == 0 {
        return Err(LinopsError::DimensionMismatch(format!(
            "metric must be square and nonempty, got {}x{}",
            b.nrows(),
            b.ncols()
        )));
    }
    if b.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(LinopsError::NonFinite);
    }
    let scale = max_abs(b).max(f64::MIN_POSITIVE);
    let defect = hermitian_defect(b);
    let allowed = tol::HERMITIAN_ASYMMETRY * scale;
    if defect > allowed {
        return Err(LinopsError::NotHermitian {
            asymmetry: defect,
            allowed,
        });
    }
    let form = hermitize(b);
    let chol: Cholesky<Scalar, Dyn> =
        Cholesky::new(form.clone()).ok_or(LinopsError::NotPositiveDefinite)?;
    let eig = SymmetricEigen::new(form.clone());
    let mut lambda_min = f64::INFINITY;
    let mut lambda_max = f64::NEG_INFINITY;
    for &l in eig.eigenvalues.iter() {
        lambda_min = lambda_min.min(l);
        lambda_max = lambda_max.max(l);
    }
    if !(lambda_min > 0.0) {
        return Err(LinopsError::NotPositiveDefinite);
    }
    Ok(Arc::new(MetricForm {
        id: NEXT_METRIC_ID.fetch_add(1, Ordering::Relaxed),
        dim: form.nrows(),
        form,
        chol_l: chol.l(),
        lambda_min,
        lambda_max,
    }))
}

/// The least `C ≥ 1` with `C⁻¹|u|_{B1} ≤ |u|_{B2} ≤ C|u|_{B1}`, from the
/// extreme eigenvalues of the Hermitian definite pencil `(B2, B1)`.
#[derive(Clone, Debug)]
pub struct MutualBound {
    pub constant: f64,
    pub pencil_extremes: (f64, f64),
}

pub fn mutual_bound(b1: &MetricForm, b2: &MetricForm) -> Result<MutualBound, LinopsError> {
    if b1.dim() != b2.dim() {
        return Err(LinopsError::DimensionMismatch(format!(
            "mutual bound needs equal dims, got {} and {}",
            b1.dim(),
            b2.dim()
        )));
    }
    // L1⁻¹ B2 L1^{-H} shares the pencil spectrum and is Hermitian.
    let l = b1.chol_l();
    let x = l
        .solve_lower_triangular(b2.matrix())
        .expect("Cholesky factor is nonsingular");
    let yh = l
        .solve_lower_triangular(&x.adjoint())
        .expect("Cholesky factor is nonsingular");
    let m = hermitize(&yh.adjoint());
    let eig = SymmetricEigen::new(m);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &l in eig.eigenvalues.iter() {
        lo = lo.min(l);
        hi = hi.max(l);
    }
    let constant = hi.sqrt().max(1.0 / lo.sqrt());
    Ok(MutualBound {
        constant,
        pencil_extremes: (lo, hi),
    })
}

/// Weighted adjoint `A^{*,B} = B_dom⁻¹ A^H B_cod`, satisfying
/// `⟨Au, v⟩_{B_cod} = ⟨u, A^{*,B} v⟩_{B_dom}`.
pub fn weighted_adjoint(
    a: &CMat,
    b_dom: &MetricForm,
    b_cod: &MetricForm,
) -> Result<CMat, LinopsError> {
    if b_cod.dim() != a.nrows() || b_dom.dim() != a.ncols() {
        return Err(LinopsError::DimensionMismatch(format!(
            "adjoint of {}x{} needs codomain metric dim {} and domain metric dim {}, got {} and {}",
            a.nrows(),
            a.ncols(),
            a.nrows(),
            a.ncols(),
            b_cod.dim(),
            b_dom.dim()
        )));
    }
    Ok(b_dom.solve(&(a.adjoint() * b_cod.matrix())))
}
