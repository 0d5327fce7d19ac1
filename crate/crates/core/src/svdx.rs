//! One-sided Jacobi SVD for complex matrices.
//!
//! Rank decisions, range/kernel bases, and principal angles all hinge on
//! singular vectors that are accurate to machine precision; one-sided Jacobi
//! delivers that at desk scale (the columns are orthogonalized directly, so
//! the factors reconstruct the matrix to roundoff rather than to the √ε the
//! general bidiagonal path can leave behind on complex input).

use crate::scalar::{cr, CMat, Scalar};

#[derive(Clone, Debug)]
pub struct Svd {
    /// Left vectors, `m × min(m,n)`; columns beyond the numerical rank are
    /// zero when the corresponding singular value vanishes.
    pub u: CMat,
    /// Singular values, descending.
    pub singular_values: Vec<f64>,
    /// Right vectors transposed-conjugated, `min(m,n) × n`.
    pub vt: CMat,
}

/// Thin SVD `A = U Σ V^H` by one-sided Jacobi on the columns.
pub fn jacobi_svd(a: &CMat) -> Svd {
    let (m, n) = (a.nrows(), a.ncols());
    if m == 0 || n == 0 {
        return Svd {
            u: CMat::zeros(m, 0),
            singular_values: Vec::new(),
            vt: CMat::zeros(0, n),
        };
    }
    if m < n {
        let t = jacobi_svd(&a.adjoint());
        return Svd {
            u: t.vt.adjoint(),
            singular_values: t.singular_values,
            vt: t.u.adjoint(),
        };
    }

    debug_assert!(
        a.iter().all(|z| z.re.is_finite() && z.im.is_finite()),
        "jacobi_svd input contains non-finite entries"
    );
    let mut w = a.clone();
    let mut v = CMat::identity(n, n);
    let scale = w.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
    if scale == 0.0 {
        return Svd {
            u: CMat::zeros(m, n),
            singular_values: vec![0.0; n],
            vt: v.adjoint(),
        };
    }

    let tol = f64::EPSILON;
    let max_sweeps = 60;
    for _ in 0..max_sweeps {
        let mut rotated = false;
        for i in 0..n - 1 {
            for j in i + 1..n {
                let mut aa = 0.0f64;
                let mut bb = 0.0f64;
                let mut cc = Scalar::new(0.0, 0.0);
                for r in 0..m {
                    let wi = w[(r, i)];
                    let wj = w[(r, j)];
                    aa += wi.norm_sqr();
                    bb += wj.norm_sqr();
                    cc += wi.conj() * wj;
                }
                let c_abs = cc.norm();
                // sqrt before multiplying so subnormal column norms cannot
                // underflow the threshold
                if c_abs <= tol * aa.sqrt() * bb.sqrt() {
                    continue;
                }
                rotated = true;
                // unitary 2x2 diagonalizing [[aa, cc],[cc*, bb]]; divide the
                // phase componentwise, the complex division would square the
                // (possibly subnormal) denominator
                let phase = Scalar::new(cc.re / c_abs, cc.im / c_abs);
                let zeta = (bb - aa) / (2.0 * c_abs);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                let phc = phase.conj();
                for r in 0..m {
                    let wi = w[(r, i)];
                    let wj = w[(r, j)];
                    w[(r, i)] = wi * cr(cs) - wj * phc * cr(sn);
                    w[(r, j)] = wi * cr(sn) + wj * phc * cr(cs);
                }
                for r in 0..n {
                    let vi = v[(r, i)];
                    let vj = v[(r, j)];
                    v[(r, i)] = vi * cr(cs) - vj * phc * cr(sn);
                    v[(r, j)] = vi * cr(sn) + vj * phc * cr(cs);
                }

            }
        }
        if !rotated {
            break;
        }
    }

    // extract norms, sort descending, normalize
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n)
        .map(|j| {
            let mut s = 0.0;
            for r in 0..m {
                s += w[(r, j)].norm_sqr();
            }
            s.sqrt()
        })
        .collect();
    order.sort_by(|&x, &y| norms[y].partial_cmp(&norms[x]).unwrap());

    let mut u = CMat::zeros(m, n);
    let mut vt = CMat::zeros(n, n);
    let mut singular_values = Vec::with_capacity(n);
    for (slot, &j) in order.iter().enumerate() {
        let sigma = norms[j];
        singular_values.push(sigma);
        if sigma > 0.0 {
            for r in 0..m {
                u[(r, slot)] = w[(r, j)] / cr(sigma);
            }
        }
        for r in 0..n {
            vt[(slot, r)] = v[(r, j)].conj();
        }
    }
    Svd {
        u,
        singular_values,
        vt,
    }
}

/// Singular values only, descending.
pub fn singular_values(a: &CMat) -> Vec<f64> {
    jacobi_svd(a).singular_values
}

/// Largest singular value; 0 for empty matrices.
pub fn spectral_norm(a: &CMat) -> f64 {
    jacobi_svd(a).singular_values.first().copied().unwrap_or(0.0)
}
