//! Kernel isomorphisms between Hodge–Dirac operators of mutually bounded
//! metrics, and the graded refinements.
//!
//! For two metrics `B1`, `B2` on the same nilpotent `Γ`, the ambient space
//! splits both as `ker Π_{B2} ⊕ ran Π_{B1}` and `ker Π_{B1} ⊕ ran Π_{B1}`,
//! so projecting one kernel onto the other along the shared complement is an
//! isomorphism; the two restricted projections are exact mutual inverses.
//! The alternative complement `ran Γ` realizes the same isomorphism inside
//! `ker Γ` and produces a genuinely different map.

use nalgebra::linalg::SymmetricEigen;

use super::dirac::{build_dirac, pencil_kernel, HodgeDiracOperator};
use super::grading::GradedStructure;
use super::HodgeError;
use crate::linops::{
    mutual_bound, range, rank_decision, Metric, NilpotentOperator, Subspace, TolPolicy,
};
use crate::scalar::{hermitize, mat_power, spectral_norm, CMat};
use crate::tol;

/// Which complement the projection runs along.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsomorphismMode {
    /// Along `ran Π_{B1}` (powers of it for the graded variant).
    AlongRanPi,
    /// Along `ran Γ`, inside `ker Γ`.
    AlongRanGamma,
}

/// A materialized isomorphism `Φ: ker Π_{B1} → ker Π_{B2}` with its inverse,
/// both expressed in the computed kernel bases.
#[derive(Clone, Debug)]
pub struct KernelIsomorphism {
    pub mode: IsomorphismMode,
    pub source_kernel: Subspace,
    pub target_kernel: Subspace,
    /// Coordinates of `Φ(source basis)` in the target basis.
    pub forward: CMat,
    /// Coordinates of `Φ⁻¹(target basis)` in the source basis.
    pub inverse: CMat,
    /// Condition number of `forward`.
    pub condition: f64,
    /// `‖forward · inverse − I‖`.
    pub residual_fi: f64,
    /// `‖inverse · forward − I‖`.
    pub residual_if: f64,
    /// Mutual bound constant of the two metrics.
    pub mutual_bound_constant: f64,
}

impl KernelIsomorphism {
    pub fn dim(&self) -> usize {
        self.forward.nrows()
    }

    pub fn invertible(&self, tolerance: f64) -> bool {
        self.residual_fi <= tolerance && self.residual_if <= tolerance
    }
}

fn condition_of(m: &CMat) -> f64 {
    if m.nrows() == 0 {
        return 1.0;
    }
    let sv = crate::svdx::singular_values(m);
    let smax = sv[0];
    let smin = sv[sv.len() - 1];
    if smin == 0.0 {
        f64::INFINITY
    } else {
        smax / smin
    }
}

fn identity_residual(m: &CMat) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    spectral_norm(&(m - CMat::identity(m.nrows(), m.ncols())))
}

/// Solve `[targets | complement] x = columns` once and read off the
/// target-block coordinates of each column.
fn oblique_coordinates(
    target: &CMat,
    complement: &CMat,
    columns: &CMat,
) -> Result<CMat, HodgeError> {
    let n = target.nrows();
    let total = target.ncols() + complement.ncols();
    if total != n {
        return Err(HodgeError::Linops(
            crate::linops::LinopsError::DimensionMismatch(format!(
                "splitting has {total} directions in ambient dim {n}"
            )),
        ));
    }
    let mut stacked = CMat::zeros(n, n);
    stacked.columns_mut(0, target.ncols()).copy_from(target);
    stacked
        .columns_mut(target.ncols(), complement.ncols())
        .copy_from(complement);
    let sv = crate::svdx::singular_values(&stacked);
    let ratio = if sv[0] > 0.0 { sv[sv.len() - 1] / sv[0] } else { 0.0 };
    if ratio < tol::COMPLEMENTARITY {
        return Err(HodgeError::Linops(
            crate::linops::LinopsError::NotComplementary {
                singular_ratio: ratio,
            },
        ));
    }
    let lu = stacked.lu();
    let solved = lu
        .solve(columns)
        .ok_or(HodgeError::Linops(crate::linops::LinopsError::NotComplementary {
            singular_ratio: ratio,
        }))?;
    Ok(solved.rows(0, target.ncols()).into_owned())
}

/// Construct the kernel isomorphism between `Π_{B1}` and `Π_{B2}`.
pub fn kernel_isomorphism(
    gamma: &NilpotentOperator,
    b1: &Metric,
    b2: &Metric,
    mode: IsomorphismMode,
    policy: &TolPolicy,
) -> Result<KernelIsomorphism, HodgeError> {
    let op1 = build_dirac(gamma, b1)?;
    let op2 = build_dirac(gamma, b2)?;
    kernel_isomorphism_of_ops(&op1, &op2, mode, policy)
}

pub fn kernel_isomorphism_of_ops(
    op1: &HodgeDiracOperator,
    op2: &HodgeDiracOperator,
    mode: IsomorphismMode,
    policy: &TolPolicy,
) -> Result<KernelIsomorphism, HodgeError> {
    let (k1, _, _) = pencil_kernel(op1.symmetrized(), op1.metric(), policy);
    let (k2, _, _) = pencil_kernel(op2.symmetrized(), op2.metric(), policy);
    if k1.dim() != k2.dim() {
        return Err(HodgeError::DimMismatchKernel {
            left: k1.dim(),
            right: k2.dim(),
        });
    }
    let (complement_fwd, complement_inv) = match mode {
        IsomorphismMode::AlongRanPi => {
            let r = range(op1.pi(), op1.metric(), policy)?;
            (r.basis().clone(), None)
        }
        IsomorphismMode::AlongRanGamma => {
            // ker Γ = ker Π_B ⊕ ran Γ for either metric; the stacked basis is
            // padded with the complement of ker Γ so the solve runs in the
            // ambient space. Inputs stay inside ker Γ, so the padding is
            // never engaged.
            let rg = range(op1.gamma().matrix(), op1.metric(), policy)?;
            let pad_fwd = range(op2.gamma_star(), op2.metric(), policy)?;
            let pad_inv = range(op1.gamma_star(), op1.metric(), policy)?;
            let mut fwd = CMat::zeros(op1.dim(), rg.dim() + pad_fwd.dim());
            fwd.columns_mut(0, rg.dim()).copy_from(rg.basis());
            fwd.columns_mut(rg.dim(), pad_fwd.dim())
                .copy_from(pad_fwd.basis());
            let mut inv = CMat::zeros(op1.dim(), rg.dim() + pad_inv.dim());
            inv.columns_mut(0, rg.dim()).copy_from(rg.basis());
            inv.columns_mut(rg.dim(), pad_inv.dim())
                .copy_from(pad_inv.basis());
            (fwd, Some(inv))
        }
    };
    let complement_inv = complement_inv.unwrap_or_else(|| complement_fwd.clone());

    let forward = oblique_coordinates(k2.basis(), &complement_fwd, k1.basis())?;
    let inverse = oblique_coordinates(k1.basis(), &complement_inv, k2.basis())?;

    let residual_fi = identity_residual(&(&forward * &inverse));
    let residual_if = identity_residual(&(&inverse * &forward));
    let mb = mutual_bound(op1.metric(), op2.metric())?;

    Ok(KernelIsomorphism {
        mode,
        condition: condition_of(&forward),
        residual_fi,
        residual_if,
        mutual_bound_constant: mb.constant,
        source_kernel: k1,
        target_kernel: k2,
        forward,
        inverse,
    })
}

/// Commutator residuals `‖[P_j, Π_B^k]‖` per degree.
#[derive(Clone, Debug)]
pub struct SplitCheckReport {
    pub power: usize,
    pub residuals: Vec<f64>,
    pub threshold: f64,
}

impl SplitCheckReport {
    pub fn passed(&self) -> bool {
        self.residuals.iter().all(|&r| r <= self.threshold)
    }

    pub fn worst(&self) -> f64 {
        self.residuals.iter().cloned().fold(0.0, f64::max)
    }
}

/// Check that `Π_B^k` commutes with every degree projector.
pub fn graded_split_check(
    op: &HodgeDiracOperator,
    grading: &GradedStructure,
    power: usize,
) -> SplitCheckReport {
    assert!(power >= 1);
    let powered = mat_power(op.pi(), power);
    let norm = spectral_norm(op.pi()).powi(power as i32);
    let threshold = tol::GRADED_COMMUTATOR * norm.max(f64::MIN_POSITIVE);
    let residuals = (0..grading.degree_count())
        .map(|j| {
            let p = grading.projector(j);
            spectral_norm(&(&p * &powered - &powered * &p))
        })
        .collect();
    SplitCheckReport {
        power,
        residuals,
        threshold,
    }
}

/// Per-degree kernel of `Π_B` from the restricted pencil
/// `(S B⁻¹ S)|_{jj} x = λ B|_{jj} x`, embedded back into ambient
/// coordinates. `S B⁻¹ S` is the Hermitian form of `Π_B²`, which preserves
/// degree whenever the split check passes.
fn graded_kernel(
    op: &HodgeDiracOperator,
    grading: &GradedStructure,
    policy: &TolPolicy,
) -> Result<Vec<Subspace>, HodgeError> {
    let b = op.metric();
    let s = op.symmetrized();
    let s_b_s = s * b.solve(s);
    let mut out = Vec::with_capacity(grading.degree_count());
    for j in 0..grading.degree_count() {
        if grading.indices(j).is_empty() {
            out.push(Subspace::from_orthonormal_basis(
                CMat::zeros(op.dim(), 0),
                op.metric().clone(),
            ));
            continue;
        }
        let t = hermitize(&grading.block(&s_b_s, j, j));
        let bj = hermitize(&grading.block(b.matrix(), j, j));
        let bj = crate::linops::certify_metric(&bj)?;
        let l = bj.chol_l();
        let x = l.solve_lower_triangular(&t).expect("nonsingular");
        let mh = l
            .solve_lower_triangular(&x.adjoint())
            .expect("nonsingular");
        let m = hermitize(&mh.adjoint());
        let eig = SymmetricEigen::new(m);
        let absvals: Vec<f64> = eig.eigenvalues.iter().map(|l| l.abs()).collect();
        let decision = rank_decision(&absvals, t.nrows(), t.ncols(), policy);
        let kernel_dim = t.nrows() - decision.rank;
        let mut order: Vec<usize> = (0..t.nrows()).collect();
        order.sort_by(|&a, &c| absvals[a].partial_cmp(&absvals[c]).unwrap());
        let mut local = CMat::zeros(t.nrows(), kernel_dim);
        for (col, &idx) in order.iter().take(kernel_dim).enumerate() {
            for r in 0..t.nrows() {
                local[(r, col)] = eig.eigenvectors[(r, idx)];
            }
        }
        let local = l
            .adjoint()
            .solve_upper_triangular(&local)
            .expect("nonsingular");
        let ambient = grading.embed_columns(j, &local);
        let sub = Subspace::from_orthonormal_basis(ambient, op.metric().clone()).with_decision(
            decision.tol_used,
            decision.gap,
            decision.ambiguous,
        );
        out.push(sub);
    }
    Ok(out)
}

/// Per-degree dimensions of `ker Π_B ∩ H_j`, each computed from the degree-
/// restricted pencil. These are the spectral Betti numbers of the operator.
pub fn graded_kernel_dims(
    op: &HodgeDiracOperator,
    grading: &GradedStructure,
    policy: &TolPolicy,
) -> Result<Vec<usize>, HodgeError> {
    Ok(graded_kernel(op, grading, policy)?
        .iter()
        .map(|s| s.dim())
        .collect())
}

/// Per-degree kernel isomorphisms along `ran Π_{B1}^k`, available once the
/// graded split check passes for both metrics.
pub fn restricted_kernel_isomorphism(
    gamma: &NilpotentOperator,
    b1: &Metric,
    b2: &Metric,
    grading: &GradedStructure,
    power: usize,
    policy: &TolPolicy,
) -> Result<Vec<KernelIsomorphism>, HodgeError> {
    let op1 = build_dirac(gamma, b1)?;
    let op2 = build_dirac(gamma, b2)?;
    for op in [&op1, &op2] {
        let check = graded_split_check(op, grading, power);
        if !check.passed() {
            let degree = check
                .residuals
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .map(|(j, _)| j)
                .unwrap_or(0);
            return Err(HodgeError::SplitCheckFailed {
                degree,
                residual: check.worst(),
                threshold: check.threshold,
            });
        }
    }

    let k1 = graded_kernel(&op1, grading, policy)?;
    let k2 = graded_kernel(&op2, grading, policy)?;
    for (j, (a, b)) in k1.iter().zip(&k2).enumerate() {
        if a.dim() != b.dim() {
            let _ = j;
            return Err(HodgeError::DimMismatchKernel {
                left: a.dim(),
                right: b.dim(),
            });
        }
    }

    let powered = mat_power(op1.pi(), power);
    let complement = range(&powered, op1.metric(), policy)?;

    let stack = |parts: &[Subspace]| {
        let total: usize = parts.iter().map(|s| s.dim()).sum();
        let mut m = CMat::zeros(gamma.dim(), total);
        let mut at = 0;
        for s in parts {
            m.columns_mut(at, s.dim()).copy_from(s.basis());
            at += s.dim();
        }
        m
    };
    let k1_all = stack(&k1);
    let k2_all = stack(&k2);

    let forward_all = oblique_coordinates(&k2_all, complement.basis(), &k1_all)?;
    let inverse_all = oblique_coordinates(&k1_all, complement.basis(), &k2_all)?;

    let mb = mutual_bound(b1, b2)?;
    let mut result = Vec::with_capacity(grading.degree_count());
    let mut offset = 0usize;
    for j in 0..grading.degree_count() {
        let d = k1[j].dim();
        let forward = forward_all
            .view((offset, offset), (d, d))
            .into_owned();
        let inverse = inverse_all
            .view((offset, offset), (d, d))
            .into_owned();
        let residual_fi = identity_residual(&(&forward * &inverse));
        let residual_if = identity_residual(&(&inverse * &forward));
        result.push(KernelIsomorphism {
            mode: IsomorphismMode::AlongRanPi,
            condition: condition_of(&forward),
            residual_fi,
            residual_if,
            mutual_bound_constant: mb.constant,
            source_kernel: k1[j].clone(),
            target_kernel: k2[j].clone(),
            forward,
            inverse,
        });
        offset += d;
    }

    // Off-diagonal coordinates must vanish: the projection respects degree.
    let total = offset;
    for (all, label) in [(&forward_all, "forward"), (&inverse_all, "inverse")] {
        let mut offdiag: f64 = 0.0;
        let mut at = 0usize;
        for j in 0..grading.degree_count() {
            let d = k1[j].dim();
            for r in 0..total {
                if r >= at && r < at + d {
                    continue;
                }
                for c in at..at + d {
                    offdiag = offdiag.max(all[(r, c)].norm());
                }
            }
            at += d;
        }
        if offdiag > 1e-8 {
            return Err(HodgeError::GradingViolation {
                detail: format!("{label} projection mixes degrees by {offdiag:e}"),
            });
        }
    }

    Ok(result)
}

/// Worst pairwise B-orthogonality defect (largest principal cosine) among the
/// three pieces of a Hodge decomposition.
pub fn decomposition_orthogonality_defect(
    decomposition: &super::dirac::HodgeDecomposition,
) -> f64 {
    use crate::linops::subspace_cosine;
    let k = &decomposition.kernel;
    let g = &decomposition.range_gamma;
    let s = &decomposition.range_gamma_star;
    subspace_cosine(k, g).max(subspace_cosine(k, s)).max(subspace_cosine(g, s))
}
