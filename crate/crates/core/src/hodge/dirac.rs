//! Hodge–Dirac operators `Π_B = Γ + B⁻¹Γ^H B` and their decompositions.

use nalgebra::linalg::SymmetricEigen;

use super::grading::GradedStructure;
use super::HodgeError;
use crate::linops::{
    certify_nilpotent, range, rank_decision, weighted_adjoint, Metric, NilpotentOperator,
    RankDecision, Subspace, TolPolicy,
};
use crate::scalar::{hermitize, max_abs, spectral_norm, CMat};
use crate::tol;

/// A certified Hodge–Dirac operator.
///
/// `pi = Γ + Γ^{*,B}` together with its symmetrized form `S = BΓ + Γ^H B`,
/// which is Hermitian by construction and represents `Π_B` in the B-frame
/// (`Π_B = B⁻¹S`). Self-adjointness of `Π_B` with respect to `⟨·,·⟩_B` is
/// exactly the Hermiticity of `S`.
#[derive(Clone, Debug)]
pub struct HodgeDiracOperator {
    gamma: NilpotentOperator,
    metric: Metric,
    pi: CMat,
    symmetrized: CMat,
    adjoint: CMat,
    adjoint_residual: f64,
}

impl HodgeDiracOperator {
    pub fn gamma(&self) -> &NilpotentOperator {
        &self.gamma
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn pi(&self) -> &CMat {
        &self.pi
    }

    pub fn symmetrized(&self) -> &CMat {
        &self.symmetrized
    }

    /// The weighted adjoint summand `Γ^{*,B}`.
    pub fn gamma_star(&self) -> &CMat {
        &self.adjoint
    }

    /// Nilpotency residual of `Γ^{*,B}`.
    pub fn adjoint_residual(&self) -> f64 {
        self.adjoint_residual
    }

    pub fn dim(&self) -> usize {
        self.gamma.dim()
    }

    /// `‖S − S^H‖ / ‖S‖`; zero by construction up to representation.
    pub fn self_adjoint_defect(&self) -> f64 {
        let scale = max_abs(&self.symmetrized).max(f64::MIN_POSITIVE);
        crate::scalar::hermitian_defect(&self.symmetrized) / scale
    }

    /// `‖Π_B − B⁻¹S‖ / ‖Π_B‖`.
    pub fn reconstruction_defect(&self) -> f64 {
        let back = self.metric.solve(&self.symmetrized);
        max_abs(&(&back - &self.pi)) / max_abs(&self.pi).max(f64::MIN_POSITIVE)
    }
}

/// Assemble `Π_B` from a certified nilpotent operator and a certified metric.
///
/// The adjoint summand is itself certified nilpotent; its residual is carried
/// on the operator.
pub fn build_dirac(
    gamma: &NilpotentOperator,
    metric: &Metric,
) -> Result<HodgeDiracOperator, HodgeError> {
    if gamma.dim() != metric.dim() {
        return Err(HodgeError::Linops(
            crate::linops::LinopsError::DimensionMismatch(format!(
                "operator dim {} vs metric dim {}",
                gamma.dim(),
                metric.dim()
            )),
        ));
    }
    let adjoint = weighted_adjoint(gamma.matrix(), metric, metric)?;
    let adjoint_residual = certify_nilpotent(&adjoint, tol::ADJOINT_NILPOTENCY)?
        .nilpotency_residual();
    let pi = gamma.matrix() + &adjoint;
    let symmetrized = metric.apply(gamma.matrix()) + gamma.matrix().adjoint() * metric.matrix();
    Ok(HodgeDiracOperator {
        gamma: gamma.clone(),
        metric: metric.clone(),
        pi,
        symmetrized,
        adjoint,
        adjoint_residual,
    })
}

/// B-orthonormal kernel of a B-self-adjoint operator given by its Hermitian
/// form `S` (the operator is `B⁻¹S`), from the definite pencil `S x = λ B x`.
pub(crate) fn pencil_kernel(
    s: &CMat,
    metric: &Metric,
    policy: &TolPolicy,
) -> (Subspace, RankDecision, Vec<f64>) {
    let l = metric.chol_l();
    let x = l
        .solve_lower_triangular(s)
        .expect("Cholesky factor is nonsingular");
    let mh = l
        .solve_lower_triangular(&x.adjoint())
        .expect("Cholesky factor is nonsingular");
    let m = hermitize(&mh.adjoint());
    let eig = SymmetricEigen::new(m);
    let absvals: Vec<f64> = eig.eigenvalues.iter().map(|l| l.abs()).collect();
    let decision = rank_decision(&absvals, s.nrows(), s.ncols(), policy);
    let n = s.nrows();
    let kernel_dim = n - decision.rank;
    // collect eigenvectors with |λ| below the cut
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| absvals[a].partial_cmp(&absvals[b]).unwrap());
    let mut basis = CMat::zeros(n, kernel_dim);
    for (col, &idx) in order.iter().take(kernel_dim).enumerate() {
        let v = eig.eigenvectors.column(idx);
        for r in 0..n {
            basis[(r, col)] = v[r];
        }
    }
    let back = l
        .adjoint()
        .solve_upper_triangular(&basis)
        .expect("Cholesky factor is nonsingular");
    let mut sub = Subspace::from_orthonormal_basis(back, metric.clone());
    sub = carry_decision(sub, &decision);
    let eigenvalues: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
    (sub, decision, eigenvalues)
}

fn carry_decision(sub: Subspace, decision: &RankDecision) -> Subspace {
    Subspace::with_decision(sub, decision.tol_used, decision.gap, decision.ambiguous)
}

/// The three-way splitting `H = ker Π_B ⊕ ran Γ ⊕ ran Γ^{*,B}`, orthogonal in
/// the B-inner product.
#[derive(Clone, Debug)]
pub struct HodgeDecomposition {
    pub kernel: Subspace,
    pub range_gamma: Subspace,
    pub range_gamma_star: Subspace,
    /// Spectrum of the pencil `S x = λ B x` (the B-frame spectrum of `Π_B`).
    pub pencil_eigenvalues: Vec<f64>,
}

impl HodgeDecomposition {
    pub fn dims(&self) -> (usize, usize, usize) {
        (
            self.kernel.dim(),
            self.range_gamma.dim(),
            self.range_gamma_star.dim(),
        )
    }

    pub fn rank_ambiguous(&self) -> bool {
        self.kernel.rank_ambiguous()
            || self.range_gamma.rank_ambiguous()
            || self.range_gamma_star.rank_ambiguous()
    }
}

/// Decompose the ambient space under a Hodge–Dirac operator.
pub fn hodge_decompose(
    op: &HodgeDiracOperator,
    policy: &TolPolicy,
) -> Result<HodgeDecomposition, HodgeError> {
    let (kernel, _, pencil_eigenvalues) = pencil_kernel(op.symmetrized(), op.metric(), policy);
    let range_gamma = range(op.gamma().matrix(), op.metric(), policy)?;
    let range_gamma_star = range(op.gamma_star(), op.metric(), policy)?;
    Ok(HodgeDecomposition {
        kernel,
        range_gamma,
        range_gamma_star,
        pencil_eigenvalues,
    })
}

/// Per-degree cohomology dimensions `dim ker(Γ|_k) − rank(Γ|_{k−1})` of a
/// graded nilpotent operator.
pub fn cohomology_dims(
    gamma: &NilpotentOperator,
    grading: &GradedStructure,
) -> Result<Vec<usize>, HodgeError> {
    if grading.total_dim() != gamma.dim() {
        return Err(HodgeError::GradingViolation {
            detail: format!(
                "grading covers dim {}, operator has dim {}",
                grading.total_dim(),
                gamma.dim()
            ),
        });
    }
    let m = gamma.matrix();
    let scale = max_abs(m).max(1.0);
    let degrees = grading.degree_count();
    for i in 0..degrees {
        for j in 0..degrees {
            if i == j + 1 {
                continue;
            }
            let block = grading.block(m, i, j);
            let worst = max_abs(&block);
            if worst > 1e-13 * scale {
                return Err(HodgeError::GradingViolation {
                    detail: format!("block ({i}, {j}) has magnitude {worst:e}"),
                });
            }
        }
    }
    let policy = TolPolicy::default();
    let mut ranks = vec![0usize; degrees];
    for k in 0..degrees.saturating_sub(1) {
        let block = grading.block(m, k + 1, k);
        if block.nrows() == 0 || block.ncols() == 0 {
            continue;
        }
        let sv = crate::svdx::singular_values(&block);
        ranks[k] = rank_decision(&sv, block.nrows(), block.ncols(), &policy).rank;
    }
    let mut dims = Vec::with_capacity(degrees);
    for k in 0..degrees {
        let out = if k + 1 < degrees { ranks[k] } else { 0 };
        let into = if k > 0 { ranks[k - 1] } else { 0 };
        let nk = grading.indices(k).len();
        if out + into > nk {
            return Err(HodgeError::GradingViolation {
                detail: format!("rank decisions exceed dimension at degree {k}"),
            });
        }
        dims.push(nk - out - into);
    }
    Ok(dims)
}

/// Kernel and rank stability under powers: `dim ker Π_B^k = dim ker Π_B`.
#[derive(Clone, Debug)]
pub struct PowerKernelReport {
    pub power: usize,
    pub dim_kernel: usize,
    pub dim_kernel_power: usize,
    pub rank: usize,
    pub rank_power: usize,
}

impl PowerKernelReport {
    pub fn passed(&self) -> bool {
        self.dim_kernel == self.dim_kernel_power && self.rank == self.rank_power
    }
}

pub fn power_kernel_check(
    op: &HodgeDiracOperator,
    k: usize,
    policy: &TolPolicy,
) -> PowerKernelReport {
    assert!(k >= 1);
    let n = op.dim();
    let rank_of = |m: &CMat| {
        if n == 0 {
            return 0;
        }
        let sv = crate::svdx::singular_values(m);
        rank_decision(&sv, m.nrows(), m.ncols(), policy).rank
    };
    let rank = rank_of(op.pi());
    let powered = crate::scalar::mat_power(op.pi(), k);
    let rank_power = rank_of(&powered);
    PowerKernelReport {
        power: k,
        dim_kernel: n - rank,
        dim_kernel_power: n - rank_power,
        rank,
        rank_power,
    }
}

/// `‖Γu‖_B` and `‖Γ^{*,B}u‖_B` are both dominated by `‖Π_B u‖_B`.
pub fn graph_norm_defect(op: &HodgeDiracOperator, u: &crate::scalar::CVec) -> f64 {
    let b = op.metric();
    let pi_u = b.norm(&(op.pi() * u));
    let g_u = b.norm(&(op.gamma().matrix() * u));
    let gs_u = b.norm(&(op.gamma_star() * u));
    (g_u - pi_u).max(gs_u - pi_u) / pi_u.max(1e-300)
}

/// Spectral norm of `Π_B`.
pub fn pi_norm(op: &HodgeDiracOperator) -> f64 {
    spectral_norm(op.pi())
}
