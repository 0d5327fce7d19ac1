use super::*;
use crate::complexes::{
    betti_smith, build_cubical, koszul_wedge, monomial, CochainComplex,
};
use crate::linops::{certify_metric, certify_nilpotent, MetricForm, TolPolicy};
use crate::roughmetrics::{sample_weight_spec, SamplerConfig};
use crate::scalar::{cmat_from_rows, cr, max_abs, CMat, CVec};
use crate::tol;

fn jordan() -> crate::linops::NilpotentOperator {
    certify_nilpotent(&cmat_from_rows(&[&[0.0, 1.0], &[0.0, 0.0]]), tol::NILPOTENCY).unwrap()
}

fn cycle3_complex() -> CochainComplex {
    crate::complexes::build_simplicial("cycle_3").unwrap()
}

fn random_weights(complex: &CochainComplex, seed: u64, clamp: f64) -> crate::linops::Metric {
    sample_weight_spec(complex.dims(), &SamplerConfig::log_gaussian(seed, clamp)).total_form()
}

#[test]
fn zero_operator_gives_zero_dirac() {
    let gamma = crate::linops::NilpotentOperator::zero(3);
    let id = MetricForm::identity(3);
    let op = build_dirac(&gamma, &id).unwrap();
    assert_eq!(max_abs(op.pi()), 0.0);
    let dec = hodge_decompose(&op, &TolPolicy::default()).unwrap();
    assert_eq!(dec.dims(), (3, 0, 0));
}

#[test]
fn jordan_block_unweighted() {
    let id = MetricForm::identity(2);
    let op = build_dirac(&jordan(), &id).unwrap();
    let expect = cmat_from_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
    assert!(max_abs(&(op.pi() - expect)) < 1e-14);
    // eigenvalues ±1
    let dec = hodge_decompose(&op, &TolPolicy::default()).unwrap();
    let mut eigs = dec.pencil_eigenvalues.clone();
    eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert!((eigs[0] + 1.0).abs() < 1e-12 && (eigs[1] - 1.0).abs() < 1e-12);
    assert_eq!(dec.dims(), (0, 1, 1));
}

#[test]
fn jordan_block_weighted() {
    // B = diag(4,1): Γ* = B⁻¹Γ^H B = [[0,0],[4,0]], so Π_B = [[0,1],[4,0]]
    // and S = [[0,4],[4,0]].
    let b = certify_metric(&cmat_from_rows(&[&[4.0, 0.0], &[0.0, 1.0]])).unwrap();
    let op = build_dirac(&jordan(), &b).unwrap();
    let expect_pi = cmat_from_rows(&[&[0.0, 1.0], &[4.0, 0.0]]);
    let expect_s = cmat_from_rows(&[&[0.0, 4.0], &[4.0, 0.0]]);
    assert!(max_abs(&(op.pi() - expect_pi)) < 1e-12);
    assert!(max_abs(&(op.symmetrized() - expect_s)) < 1e-12);
    assert_eq!(op.self_adjoint_defect(), 0.0);
    assert!(op.reconstruction_defect() < 1e-12);
    assert!(op.adjoint_residual() <= tol::ADJOINT_NILPOTENCY);
}

#[test]
fn cycle3_decomposition_dims() {
    let complex = cycle3_complex();
    let gamma = complex.total_gamma().unwrap();
    let id = MetricForm::identity(6);
    let op = build_dirac(&gamma, &id).unwrap();
    let dec = hodge_decompose(&op, &TolPolicy::default()).unwrap();
    assert_eq!(dec.dims(), (2, 2, 2));
    assert!(!dec.rank_ambiguous());
    assert!(decomposition_orthogonality_defect(&dec) < tol::ORTHONORMALITY);
}

#[test]
fn octahedron_kernel_dim_under_sampled_metric() {
    let complex = crate::complexes::build_simplicial("octahedron").unwrap();
    let gamma = complex.total_gamma().unwrap();
    let smith_total: usize = betti_smith(&complex).unwrap().betti.iter().sum();
    for seed in [3u64, 17] {
        let b = random_weights(&complex, seed, 4.0);
        let op = build_dirac(&gamma, &b).unwrap();
        let dec = hodge_decompose(&op, &TolPolicy::default()).unwrap();
        assert_eq!(dec.kernel.dim(), smith_total);
        let (k, rg, rs) = dec.dims();
        assert_eq!(k + rg + rs, 26);
        assert_eq!(rg, rs);
    }
}

#[test]
fn cohomology_dims_match_smith_oracle() {
    for (name, expect) in [
        ("cycle_3", vec![1usize, 1]),
        ("octahedron", vec![1, 0, 1]),
    ] {
        let complex = crate::complexes::build_simplicial(name).unwrap();
        let gamma = complex.total_gamma().unwrap();
        let dims = cohomology_dims(&gamma, complex.grading()).unwrap();
        assert_eq!(dims, expect, "{name}");
        assert_eq!(dims, betti_smith(&complex).unwrap().betti, "{name} vs oracle");
    }
    let torus = build_cubical(&[4, 4], &[true, true]).unwrap();
    let gamma = torus.total_gamma().unwrap();
    assert_eq!(
        cohomology_dims(&gamma, torus.grading()).unwrap(),
        vec![1, 2, 1]
    );
}

#[test]
fn grading_violation_detected() {
    let gamma = jordan();
    // grading that puts both coordinates in degree 0: Γ maps degree 0 to 0
    let grading = GradedStructure::from_dims(&[2]);
    assert!(matches!(
        cohomology_dims(&gamma, &grading),
        Err(HodgeError::GradingViolation { .. })
    ));
}

#[test]
fn power_kernels_are_stable() {
    // invertible Π: kernel stays empty under powers
    let id = MetricForm::identity(2);
    let op = build_dirac(&jordan(), &id).unwrap();
    let report = power_kernel_check(&op, 2, &TolPolicy::default());
    assert!(report.passed());
    assert_eq!(report.dim_kernel, 0);

    let complex = cycle3_complex();
    let gamma = complex.total_gamma().unwrap();
    let b = random_weights(&complex, 5, 3.0);
    let op = build_dirac(&gamma, &b).unwrap();
    for k in [2usize, 3] {
        let report = power_kernel_check(&op, k, &TolPolicy::default());
        assert!(report.passed(), "power {k}: {report:?}");
        assert_eq!(report.dim_kernel, 2);
    }

    let zero = crate::linops::NilpotentOperator::zero(4);
    let op = build_dirac(&zero, &MetricForm::identity(4)).unwrap();
    let report = power_kernel_check(&op, 3, &TolPolicy::default());
    assert!(report.passed());
    assert_eq!(report.dim_kernel, 4);
}

#[test]
fn graph_norms_dominated_by_dirac_norm() {
    let complex = cycle3_complex();
    let gamma = complex.total_gamma().unwrap();
    let b = random_weights(&complex, 23, 4.0);
    let op = build_dirac(&gamma, &b).unwrap();
    let mut rng = crate::rng::SplitMix64::new(99);
    for _ in 0..100 {
        let u = CVec::from_fn(6, |_, _| {
            crate::scalar::c(rng.next_normal(), rng.next_normal())
        });
        assert!(graph_norm_defect(&op, &u) <= 1e-10);
    }
}

#[test]
fn identity_metrics_give_identity_isomorphism() {
    let complex = cycle3_complex();
    let gamma = complex.total_gamma().unwrap();
    let id = MetricForm::identity(6);
    for mode in [IsomorphismMode::AlongRanPi, IsomorphismMode::AlongRanGamma] {
        let iso = kernel_isomorphism(&gamma, &id, &id, mode, &TolPolicy::default()).unwrap();
        assert_eq!(iso.dim(), 2);
        // same pencil, same bases: the coordinates of the projection are I
        assert!(max_abs(&(&iso.forward - CMat::identity(2, 2))) < 1e-10);
        assert!((iso.mutual_bound_constant - 1.0).abs() < 1e-12);
    }
}

#[test]
fn cycle3_isomorphism_under_bounded_metric() {
    let complex = cycle3_complex();
    let gamma = complex.total_gamma().unwrap();
    let id = MetricForm::identity(6);
    let b2 = random_weights(&complex, 41, 2.0);
    for mode in [IsomorphismMode::AlongRanPi, IsomorphismMode::AlongRanGamma] {
        let iso = kernel_isomorphism(&gamma, &id, &b2, mode, &TolPolicy::default()).unwrap();
        assert_eq!(iso.dim(), 2);
        assert!(iso.residual_fi <= 1e-10, "{mode:?}: {}", iso.residual_fi);
        assert!(iso.residual_if <= 1e-10, "{mode:?}: {}", iso.residual_if);
        assert!(iso.condition.is_finite());
        assert!(iso.mutual_bound_constant <= 2.0 + 1e-9);
    }
}

#[test]
fn the_two_modes_cross_validate() {
    // Restricted to the kernels, the two projection routes agree: a kernel
    // vector's complement part can have no ran Γ^{*} component because
    // ker Γ ∩ ran Γ^{*,B} = 0. The ambient projections themselves differ.
    let complex = cycle3_complex();
    let gamma = complex.total_gamma().unwrap();
    let id = MetricForm::identity(6);
    let b2 = random_weights(&complex, 8, 2.0);
    let policy = TolPolicy::default();
    let a = kernel_isomorphism(&gamma, &id, &b2, IsomorphismMode::AlongRanPi, &policy).unwrap();
    let b =
        kernel_isomorphism(&gamma, &id, &b2, IsomorphismMode::AlongRanGamma, &policy).unwrap();
    assert!(max_abs(&(&a.forward - &b.forward)) < 1e-9);

    // The underlying ambient projectors disagree away from ker Γ.
    let op1 = build_dirac(&gamma, &id).unwrap();
    let op2 = build_dirac(&gamma, &b2).unwrap();
    let ran_pi = crate::linops::range(op1.pi(), &id, &policy).unwrap();
    let ran_gamma = crate::linops::range(gamma.matrix(), &id, &policy).unwrap();
    let pad = crate::linops::range(op2.gamma_star(), &b2, &policy).unwrap();
    let mut padded = CMat::zeros(6, ran_gamma.dim() + pad.dim());
    padded
        .columns_mut(0, ran_gamma.dim())
        .copy_from(ran_gamma.basis());
    padded
        .columns_mut(ran_gamma.dim(), pad.dim())
        .copy_from(pad.basis());
    let k2 = kernel_isomorphism(&gamma, &b2, &b2, IsomorphismMode::AlongRanPi, &policy)
        .unwrap()
        .target_kernel;
    let along_pi = crate::linops::oblique_projector(
        &k2,
        &crate::linops::Subspace::from_spanning_set(ran_pi.basis(), id.clone()),
    )
    .unwrap();
    let along_gamma = crate::linops::oblique_projector(
        &k2,
        &crate::linops::Subspace::from_spanning_set(&padded, id.clone()),
    )
    .unwrap();
    assert!(max_abs(&(along_pi.matrix() - along_gamma.matrix())) > 1e-6);
}

#[test]
fn koszul_generator_gives_empty_isomorphism() {
    // e(e₁) on Λ(C⁴) has trivial cohomology: both kernels of Π vanish and Φ
    // is the empty isomorphism.
    let (_, op) = koszul_wedge(4, &monomial(4, &[0])).unwrap();
    let b1 = MetricForm::identity(16);
    let b2 = certify_metric(&(CMat::identity(16, 16) * cr(2.5))).unwrap();
    let iso =
        kernel_isomorphism(&op, &b1, &b2, IsomorphismMode::AlongRanPi, &TolPolicy::default())
            .unwrap();
    assert_eq!(iso.dim(), 0);
    assert_eq!(iso.residual_fi, 0.0);
}

#[test]
fn graded_split_passes_at_two_fails_at_one() {
    let complex = cycle3_complex();
    let gamma = complex.total_gamma().unwrap();
    let weights = sample_weight_spec(complex.dims(), &SamplerConfig::log_gaussian(2, 3.0));
    let b = weights.total_form();
    let op = build_dirac(&gamma, &b).unwrap();
    let check2 = graded_split_check(&op, complex.grading(), 2);
    assert!(check2.passed(), "k=2 residuals {:?}", check2.residuals);
    assert!(check2.worst() <= 1e-12 * pi_norm(&op).powi(2));
    let check1 = graded_split_check(&op, complex.grading(), 1);
    assert!(!check1.passed(), "Π mixes degrees, k=1 must fail");
}

#[test]
fn off_degree_coupling_breaks_the_split() {
    let complex = cycle3_complex();
    let gamma = complex.total_gamma().unwrap();
    let mut coupled = CMat::identity(6, 6);
    coupled[(0, 3)] = cr(0.3);
    coupled[(3, 0)] = cr(0.3);
    let b = certify_metric(&coupled).unwrap();
    let op = build_dirac(&gamma, &b).unwrap();
    let check = graded_split_check(&op, complex.grading(), 2);
    assert!(!check.passed(), "coupled metric must fail the k=2 check");

    let id = MetricForm::identity(6);
    assert!(matches!(
        restricted_kernel_isomorphism(&gamma, &id, &b, complex.grading(), 2, &TolPolicy::default()),
        Err(HodgeError::SplitCheckFailed { .. })
    ));
}

#[test]
fn restricted_isomorphism_recovers_betti_numbers() {
    for (name, expect) in [("octahedron", vec![1usize, 0, 1])] {
        let complex = crate::complexes::build_simplicial(name).unwrap();
        let gamma = complex.total_gamma().unwrap();
        let b1 = sample_weight_spec(complex.dims(), &SamplerConfig::log_gaussian(31, 3.0))
            .total_form();
        let b2 = sample_weight_spec(complex.dims(), &SamplerConfig::log_gaussian(77, 3.0))
            .total_form();
        let isos = restricted_kernel_isomorphism(
            &gamma,
            &b1,
            &b2,
            complex.grading(),
            2,
            &TolPolicy::default(),
        )
        .unwrap();
        let dims: Vec<usize> = isos.iter().map(|i| i.dim()).collect();
        assert_eq!(dims, expect, "{name}");
        for iso in &isos {
            assert!(iso.invertible(tol::ISOMORPHISM));
        }
    }

    let torus = build_cubical(&[4, 4], &[true, true]).unwrap();
    let gamma = torus.total_gamma().unwrap();
    let b1 = sample_weight_spec(torus.dims(), &SamplerConfig::log_gaussian(4, 2.0)).total_form();
    let b2 = sample_weight_spec(torus.dims(), &SamplerConfig::log_gaussian(9, 2.0)).total_form();
    let isos =
        restricted_kernel_isomorphism(&gamma, &b1, &b2, torus.grading(), 2, &TolPolicy::default())
            .unwrap();
    let dims: Vec<usize> = isos.iter().map(|i| i.dim()).collect();
    assert_eq!(dims, vec![1, 2, 1]);
}

#[test]
fn restricted_isomorphism_is_identity_for_equal_metrics() {
    let complex = cycle3_complex();
    let gamma = complex.total_gamma().unwrap();
    let b = sample_weight_spec(complex.dims(), &SamplerConfig::log_gaussian(6, 2.0)).total_form();
    let isos =
        restricted_kernel_isomorphism(&gamma, &b, &b, complex.grading(), 2, &TolPolicy::default())
            .unwrap();
    for iso in &isos {
        if iso.dim() > 0 {
            assert!(max_abs(&(&iso.forward - CMat::identity(iso.dim(), iso.dim()))) < 1e-9);
        }
    }
}
