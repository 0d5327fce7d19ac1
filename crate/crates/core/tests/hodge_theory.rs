//! Cross-module structure checks: decompositions, splittings, and metric
//! independence of kernel dimensions, always against the exact integer
//! oracle.

use hodge_core::complexes::{betti_smith, build_cubical, build_simplicial, CochainComplex};
use hodge_core::hodge::{
    build_dirac, decomposition_orthogonality_defect, hodge_decompose, kernel_isomorphism,
    IsomorphismMode,
};
use hodge_core::linops::{intersect, kernel, range, subspace_cosine, Metric, TolPolicy};
use hodge_core::roughmetrics::{sample_weight_spec, SamplerConfig};
use hodge_core::scalar::CMat;

fn fixtures() -> Vec<(&'static str, CochainComplex)> {
    vec![
        ("path_2", build_simplicial("path_2").unwrap()),
        ("cycle_3", build_simplicial("cycle_3").unwrap()),
        ("octahedron", build_simplicial("octahedron").unwrap()),
        ("torus_4x4", build_cubical(&[4, 4], &[true, true]).unwrap()),
    ]
}

fn sampled_metric(complex: &CochainComplex, seed: u64, clamp: f64) -> Metric {
    sample_weight_spec(complex.dims(), &SamplerConfig::log_gaussian(seed, clamp)).total_form()
}

#[test]
fn kernel_dimension_is_metric_independent() {
    let policy = TolPolicy::default();
    for (name, complex) in fixtures() {
        let gamma = complex.total_gamma().unwrap();
        let oracle: usize = betti_smith(&complex).unwrap().betti.iter().sum();
        for seed in 0..20u64 {
            let b = sampled_metric(&complex, seed, 4.0);
            let op = build_dirac(&gamma, &b).unwrap();
            let dec = hodge_decompose(&op, &policy).unwrap();
            assert_eq!(
                dec.kernel.dim(),
                oracle,
                "{name} seed {seed}: kernel dim drifted from the integer oracle"
            );
        }
    }
}

#[test]
fn decomposition_dimensions_and_orthogonality() {
    let policy = TolPolicy::default();
    for (name, complex) in fixtures() {
        let gamma = complex.total_gamma().unwrap();
        let n = complex.total_dim();
        for seed in [1u64, 12, 123] {
            let b = sampled_metric(&complex, seed, 4.0);
            let op = build_dirac(&gamma, &b).unwrap();
            let dec = hodge_decompose(&op, &policy).unwrap();
            let (k, rg, rs) = dec.dims();
            assert_eq!(k + rg + rs, n, "{name} seed {seed}");
            assert_eq!(rg, rs, "{name}: rank Γ must equal rank Γ*");
            assert!(
                decomposition_orthogonality_defect(&dec) <= 1e-10,
                "{name} seed {seed}: pieces are not B-orthogonal"
            );
        }
    }
}

#[test]
fn kernel_of_dirac_is_intersection_of_kernels() {
    // ker Π_B = ker Γ ∩ ker Γ^{*,B}, computed two ways.
    let policy = TolPolicy::default();
    let complex = build_simplicial("cycle_3").unwrap();
    let gamma = complex.total_gamma().unwrap();
    for seed in [2u64, 9] {
        let b = sampled_metric(&complex, seed, 3.0);
        let op = build_dirac(&gamma, &b).unwrap();
        let ker_gamma = kernel(gamma.matrix(), &b, &policy).unwrap();
        let ker_star = kernel(op.gamma_star(), &b, &policy).unwrap();
        let cap = intersect(&ker_gamma, &ker_star).unwrap();
        let dec = hodge_decompose(&op, &policy).unwrap();
        assert_eq!(cap.dim(), dec.kernel.dim());
        // and the two spaces coincide: all principal cosines are 1
        let overlap = intersect(&cap, &dec.kernel).unwrap();
        assert_eq!(overlap.dim(), cap.dim());
    }
}

#[test]
fn kernel_of_gamma_splits_as_kernel_plus_range() {
    // dim ker Γ = dim ker Π_B + rank Γ, exactly.
    let policy = TolPolicy::default();
    for (name, complex) in fixtures() {
        let gamma = complex.total_gamma().unwrap();
        for seed in [4u64, 44] {
            let b = sampled_metric(&complex, seed, 4.0);
            let op = build_dirac(&gamma, &b).unwrap();
            let dec = hodge_decompose(&op, &policy).unwrap();
            let ker_gamma = kernel(gamma.matrix(), &b, &policy).unwrap();
            assert_eq!(
                ker_gamma.dim(),
                dec.kernel.dim() + dec.range_gamma.dim(),
                "{name} seed {seed}"
            );
        }
    }
}

#[test]
fn four_way_decomposition_is_complementary() {
    // ker Γ ∩ ker Γ^{*,B}, ran Γ, and ran Γ^{*,B} stack to a nonsingular
    // basis of the ambient space, for random weights.
    let policy = TolPolicy::default();
    for (name, complex) in fixtures() {
        let gamma = complex.total_gamma().unwrap();
        let n = complex.total_dim();
        let b = sampled_metric(&complex, 7, 4.0);
        let op = build_dirac(&gamma, &b).unwrap();
        let dec = hodge_decompose(&op, &policy).unwrap();
        let mut stacked = CMat::zeros(n, n);
        let mut at = 0usize;
        for part in [&dec.kernel, &dec.range_gamma, &dec.range_gamma_star] {
            stacked.columns_mut(at, part.dim()).copy_from(part.basis());
            at += part.dim();
        }
        assert_eq!(at, n, "{name}");
        let sv = hodge_core::svdx::singular_values(&stacked);
        assert!(
            sv[sv.len() - 1] / sv[0] > 1e-8,
            "{name}: stacked decomposition is numerically singular"
        );
    }
}

#[test]
fn three_way_complement_of_kernels_and_ranges() {
    // With Y = ran Γ, Y' = ran Γ^{*,B}, Z = ker Γ^{*,B}, Z' = ker Γ:
    // the ambient space is (Z ∩ Z') ⊕ Y ⊕ Y'.
    let policy = TolPolicy::default();
    let complex = build_simplicial("octahedron").unwrap();
    let gamma = complex.total_gamma().unwrap();
    let n = complex.total_dim();
    let b = sampled_metric(&complex, 13, 3.0);
    let op = build_dirac(&gamma, &b).unwrap();

    let z = kernel(op.gamma_star(), &b, &policy).unwrap();
    let z_prime = kernel(gamma.matrix(), &b, &policy).unwrap();
    let y = range(gamma.matrix(), &b, &policy).unwrap();
    let y_prime = range(op.gamma_star(), &b, &policy).unwrap();

    let core = intersect(&z, &z_prime).unwrap();
    assert_eq!(core.dim() + y.dim() + y_prime.dim(), n);

    let mut stacked = CMat::zeros(n, n);
    let mut at = 0usize;
    for part in [&core, &y, &y_prime] {
        stacked.columns_mut(at, part.dim()).copy_from(part.basis());
        at += part.dim();
    }
    let sv = hodge_core::svdx::singular_values(&stacked);
    assert!(sv[sv.len() - 1] / sv[0] > 1e-8);
}

#[test]
fn spectral_and_integer_oracles_agree_everywhere() {
    let policy = TolPolicy::default();
    let mut all: Vec<(&str, CochainComplex)> = fixtures();
    all.push(("ball", build_simplicial("ball_cone_octahedron").unwrap()));
    all.push(("torus_tri", build_simplicial("torus_triangulated").unwrap()));
    all.push(("cycle_8", build_simplicial("cycle_8").unwrap()));
    for (name, complex) in all {
        let gamma = complex.total_gamma().unwrap();
        let report = betti_smith(&complex).unwrap();
        let spectral =
            hodge_core::hodge::cohomology_dims(&gamma, complex.grading()).unwrap();
        assert_eq!(spectral, report.betti, "{name}: spectral vs integer oracle");

        let id = hodge_core::linops::MetricForm::identity(complex.total_dim());
        let op = build_dirac(&gamma, &id).unwrap();
        let dec = hodge_decompose(&op, &policy).unwrap();
        let total: usize = report.betti.iter().sum();
        assert_eq!(dec.kernel.dim(), total, "{name}: kernel vs oracle total");
    }
}

#[test]
fn kernel_isomorphism_survives_20_random_metrics() {
    let policy = TolPolicy::default();
    let complex = build_simplicial("octahedron").unwrap();
    let gamma = complex.total_gamma().unwrap();
    let b1 = sampled_metric(&complex, 1000, 2.0);
    for seed in 0..20u64 {
        let b2 = sampled_metric(&complex, seed, 2.0);
        for mode in [IsomorphismMode::AlongRanPi, IsomorphismMode::AlongRanGamma] {
            let iso = kernel_isomorphism(&gamma, &b1, &b2, mode, &policy).unwrap();
            assert_eq!(iso.dim(), 2);
            assert!(iso.invertible(1e-8), "seed {seed} {mode:?}");
            assert!(iso.condition.is_finite());
        }
    }
}

#[test]
fn nonorthogonal_splitting_is_observable() {
    // ker Π_B need not be orthogonal (unweighted) to ran Π_B: exhibit a
    // metric where the principal cosine against the unweighted complement is
    // positive.
    let policy = TolPolicy::default();
    let complex = build_simplicial("cycle_3").unwrap();
    let gamma = complex.total_gamma().unwrap();
    let id = hodge_core::linops::MetricForm::identity(6);
    let b = sampled_metric(&complex, 3, 4.0);
    let op_b = build_dirac(&gamma, &b).unwrap();
    let dec_b = hodge_decompose(&op_b, &policy).unwrap();
    // re-express both spaces in the unweighted geometry
    let kernel_plain =
        hodge_core::linops::Subspace::from_spanning_set(dec_b.kernel.basis(), id.clone());
    let ran_pi = range(op_b.pi(), &id, &policy).unwrap();
    let cosine = subspace_cosine(&kernel_plain, &ran_pi);
    assert!(
        cosine > 1e-3,
        "expected a visibly oblique splitting, got cosine {cosine}"
    );
}
