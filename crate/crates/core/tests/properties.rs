//! Property tests for the weighted linear-algebra invariants.

use hodge_core::linops::{
    certify_metric, certify_nilpotent, intersect, kernel, mutual_bound, oblique_projector, range,
    weighted_adjoint, Metric, Subspace, TolPolicy,
};
use hodge_core::scalar::{c, cr, max_abs, CMat, CVec};
use nalgebra::Complex;
use proptest::prelude::*;

fn complex_entry() -> impl Strategy<Value = Complex<f64>> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| c(re, im))
}

fn cmat(rows: usize, cols: usize) -> impl Strategy<Value = CMat> {
    proptest::collection::vec(complex_entry(), rows * cols)
        .prop_map(move |v| CMat::from_vec(rows, cols, v))
}

fn spd(dim: usize) -> impl Strategy<Value = Metric> {
    cmat(dim, dim).prop_map(move |g| {
        let b = &g * g.adjoint() + CMat::identity(dim, dim) * cr(0.5);
        certify_metric(&b).expect("Gram + I/2 is SPD")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjoint_involution(
        (a, b1, b2) in (2usize..6, 2usize..6).prop_flat_map(|(m, n)| {
            (cmat(m, n), spd(n), spd(m))
        })
    ) {
        let adj = weighted_adjoint(&a, &b1, &b2).unwrap();
        let back = weighted_adjoint(&adj, &b2, &b1).unwrap();
        let scale = max_abs(&a).max(1.0);
        prop_assert!(max_abs(&(back - &a)) <= 1e-10 * scale * 100.0);
    }

    #[test]
    fn adjoint_pairing(
        (a, b1, b2, us, vs) in (2usize..6, 2usize..6).prop_flat_map(|(m, n)| {
            (cmat(m, n), spd(n), spd(m), cmat(n, 3), cmat(m, 3))
        })
    ) {
        let adj = weighted_adjoint(&a, &b1, &b2).unwrap();
        let norm_a = hodge_core::scalar::spectral_norm(&a);
        for k in 0..3 {
            let u: CVec = us.column(k).into_owned();
            let v: CVec = vs.column(k).into_owned();
            let lhs = b2.inner(&(&a * &u), &v);
            let rhs = b1.inner(&u, &(&adj * &v));
            let bound = 1e-10 * norm_a.max(1.0) * u.norm().max(1.0) * v.norm().max(1.0);
            prop_assert!((lhs - rhs).norm() <= bound * 100.0);
        }
    }

    #[test]
    fn adjoint_of_nilpotent_is_nilpotent(
        (d, b) in (2usize..5, 2usize..5).prop_flat_map(|(m, n)| {
            (cmat(m, n), spd(m + n))
        })
    ) {
        // Γ = [[0,0],[d,0]] in a two-degree layout is square-zero.
        let (m, n) = (d.nrows(), d.ncols());
        let dim = m + n;
        let mut gamma = CMat::zeros(dim, dim);
        for i in 0..m {
            for j in 0..n {
                gamma[(n + i, j)] = d[(i, j)];
            }
        }
        let gamma = certify_nilpotent(&gamma, 1e-12).unwrap();
        let adj = weighted_adjoint(gamma.matrix(), &b, &b).unwrap();
        let certified = certify_nilpotent(&adj, 1e-10);
        prop_assert!(certified.is_ok());
    }

    #[test]
    fn rank_nullity_is_exact(
        a in (1usize..6, 1usize..6).prop_flat_map(|(m, n)| cmat(m, n))
    ) {
        let policy = TolPolicy::default();
        let bd = hodge_core::linops::MetricForm::identity(a.ncols());
        let bc = hodge_core::linops::MetricForm::identity(a.nrows());
        let ker = kernel(&a, &bd, &policy).unwrap();
        let ran = range(&a, &bc, &policy).unwrap();
        if !ker.rank_ambiguous() && !ran.rank_ambiguous() {
            prop_assert_eq!(ker.dim() + ran.dim(), a.ncols());
        }
    }

    #[test]
    fn projector_complement_identity(
        (span_x, span_y, b) in (2usize..6, 1usize..3).prop_flat_map(|(dim, r)| {
            let r = r.min(dim - 1);
            (cmat(dim, r), cmat(dim, dim - r), spd(dim))
        })
    ) {
        let x = Subspace::from_spanning_set(&span_x, b.clone());
        let y = Subspace::from_spanning_set(&span_y, b.clone());
        if let (Ok(pxy), Ok(pyx)) = (oblique_projector(&x, &y), oblique_projector(&y, &x)) {
            let n = x.ambient_dim();
            let sum = pxy.matrix() + pyx.matrix();
            let defect = max_abs(&(sum - CMat::identity(n, n)));
            prop_assert!(defect <= 1e-10 * pxy.condition().max(1.0) * 100.0);
        }
    }

    #[test]
    fn mutual_bound_reflexive_and_symmetric(
        (b1, b2) in (2usize..6).prop_flat_map(|n| (spd(n), spd(n)))
    ) {
        let refl = mutual_bound(&b1, &b1).unwrap().constant;
        prop_assert!((refl - 1.0).abs() <= 1e-12 * 10.0);
        let ab = mutual_bound(&b1, &b2).unwrap().constant;
        let ba = mutual_bound(&b2, &b1).unwrap().constant;
        prop_assert!(ab >= 1.0);
        prop_assert!((ab - ba).abs() <= 1e-12 * ab.max(1.0) * 10.0);
    }

    #[test]
    fn intersection_is_bounded_and_b_orthonormal(
        (s1, s2, b) in (3usize..6).prop_flat_map(|n| (cmat(n, 2), cmat(n, 2), spd(n)))
    ) {
        let x = Subspace::from_spanning_set(&s1, b.clone());
        let y = Subspace::from_spanning_set(&s2, b.clone());
        let cap = intersect(&x, &y).unwrap();
        prop_assert!(cap.dim() <= x.dim().min(y.dim()));
        prop_assert!(b.orthonormality_defect(cap.basis()) < 1e-9);
    }
}
