//! The nilpotency gate.

use super::error::LinopsError;
use crate::scalar::{is_integer_matrix, spectral_norm, CMat};


/// A certified square-zero operator `Γ`.
///
/// For integer data the square is checked in exact integer arithmetic and the
/// residual is exactly zero; otherwise the residual is
/// `‖Γ²‖ / max(1, ‖Γ‖²)` in the spectral norm.
#[derive(Clone, Debug)]
pub struct NilpotentOperator {
    dim: usize,
    map: CMat,
    nilpotency_residual: f64,
    exact_integer: bool,
}

impl NilpotentOperator {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMat {
        &self.map
    }

    pub fn nilpotency_residual(&self) -> f64 {
        self.nilpotency_residual
    }

    pub fn exact_integer(&self) -> bool {
        self.exact_integer
    }

    /// The zero operator, trivially nilpotent.
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            map: CMat::zeros(dim, dim),
            nilpotency_residual: 0.0,
            exact_integer: true,
        }
    }
}

/// Exact integer square when entries are integers; `None` on overflow risk.
fn integer_square_is_zero(m: &CMat) -> Option<bool> {
    let n = m.nrows();
    let ints: Vec<i128> = m.iter().map(|z| z.re as i128).collect();
    let at = |i: usize, j: usize| ints[j * n + i]; // column-major like nalgebra
    let mut bound: i128 = 0;
    for v in &ints {
        bound = bound.max(v.abs());
    }
    // n * bound² must fit comfortably in i128.
    if bound > 0 && (n as i128).checked_mul(bound.checked_mul(bound)?)? > i128::MAX / 4 {
        return None;
    }
    for i in 0..n {
        for j in 0..n {
            let mut acc: i128 = 0;
            for k in 0..n {
                acc += at(i, k) * at(k, j);
            }
            if acc != 0 {
                return Some(false);
            }
        }
    }
    Some(true)
}

/// Gate a candidate operator: accept when `‖A²‖ ≤ tol · max(1, ‖A‖²)`.
///
/// This is the runtime check that rejects non-nilpotent extensions; the
/// residual travels with the error so a rejection is diagnosable.
pub fn certify_nilpotent(a: &CMat, tolerance: f64) -> Result<NilpotentOperator, LinopsError> {
    if a.nrows() != a.ncols() {
        return Err(LinopsError::DimensionMismatch(format!(
            "nilpotency check needs a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(LinopsError::NonFinite);
    }
    let integer = is_integer_matrix(a);
    if integer {
        if let Some(zero) = integer_square_is_zero(a) {
            if zero {
                return Ok(NilpotentOperator {
                    dim: a.nrows(),
                    map: a.clone(),
                    nilpotency_residual: 0.0,
                    exact_integer: true,
                });
            }
            // Integer and provably nonzero square: report the float residual.
            let residual = residual_of(a);
            return Err(LinopsError::NotNilpotent {
                residual,
                allowed: tolerance,
            });
        }
    }
    let residual = residual_of(a);
    if residual <= tolerance {
        Ok(NilpotentOperator {
            dim: a.nrows(),
            map: a.clone(),
            nilpotency_residual: residual,
            exact_integer: false,
        })
    } else {
        Err(LinopsError::NotNilpotent {
            residual,
            allowed: tolerance,
        })
    }
}

fn residual_of(a: &CMat) -> f64 {
    let norm = spectral_norm(a);
    let sq = a * a;
    spectral_norm(&sq) / norm.powi(2).max(1.0)
}
