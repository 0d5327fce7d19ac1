//! Scalar and dense-matrix aliases shared across the crate.
//!
//! All operator arithmetic is complex; real data embeds via [`embed_real`].

use nalgebra::{Complex, DMatrix, DVector};

pub type Scalar = Complex<f64>;
pub type CMat = DMatrix<Scalar>;
pub type CVec = DVector<Scalar>;
pub type RMat = DMatrix<f64>;
pub type RVec = DVector<f64>;

pub fn c(re: f64, im: f64) -> Scalar {
    Complex::new(re, im)
}

pub fn cr(re: f64) -> Scalar {
    Complex::new(re, 0.0)
}

/// Embed a real matrix as a complex one.
pub fn embed_real(m: &RMat) -> CMat {
    CMat::from_fn(m.nrows(), m.ncols(), |i, j| cr(m[(i, j)]))
}

pub fn cmat_from_rows(rows: &[&[f64]]) -> CMat {
    let nr = rows.len();
    let nc = if nr == 0 { 0 } else { rows[0].len() };
    CMat::from_fn(nr, nc, |i, j| cr(rows[i][j]))
}

/// Largest entry magnitude; 0 for empty matrices.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

/// Spectral norm (largest singular value); 0 for empty matrices.
pub fn spectral_norm(m: &CMat) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    crate::svdx::spectral_norm(m)
}

/// `max|M - M^H|` over entries.
pub fn hermitian_defect(m: &CMat) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `(M + M^H)/2`, exactly Hermitian entrywise.
pub fn hermitize(m: &CMat) -> CMat {
    let n = m.nrows();
    CMat::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * cr(0.5))
}

/// Standard unweighted inner product `⟨u, v⟩ = Σ u_i conj(v_i)`.
pub fn inner(u: &CVec, v: &CVec) -> Scalar {
    let mut acc = cr(0.0);
    for i in 0..u.len() {
        acc += u[i] * v[i].conj();
    }
    acc
}

/// Matrix power by repeated multiplication (small exponents only).
pub fn mat_power(m: &CMat, k: usize) -> CMat {
    assert!(k >= 1, "power must be at least 1");
    let mut out = m.clone();
    for _ in 1..k {
        out = &out * m;
    }
    out
}

/// True when every entry is a real integer representable exactly in f64.
pub fn is_integer_matrix(m: &CMat) -> bool {
    m.iter().all(|z| {
        z.im == 0.0 && z.re.fract() == 0.0 && z.re.abs() <= (1u64 << 52) as f64
    })
}
