//! Oblique projectors onto a subspace along a complement.

use super::error::LinopsError;
use super::subspace::Subspace;
use crate::scalar::{spectral_norm, CMat};
use crate::tol;

/// Projector `P` with `ran P = X` and `ker P = Y`.
#[derive(Clone, Debug)]
pub struct ObliqueProjector {
    ambient_dim: usize,
    range_basis: CMat,
    nullspace_basis: CMat,
    matrix: CMat,
    condition: f64,
}

impl ObliqueProjector {
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn range_basis(&self) -> &CMat {
        &self.range_basis
    }

    pub fn nullspace_basis(&self) -> &CMat {
        &self.nullspace_basis
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    /// `‖P‖₂`, the obliqueness of the splitting.
    pub fn condition(&self) -> f64 {
        self.condition
    }

    pub fn apply(&self, m: &CMat) -> CMat {
        &self.matrix * m
    }
}

/// Build the projector onto `X` along `Y`; fails with `NotComplementary` when
/// the stacked basis `[X | Y]` is numerically singular, i.e. the ambient space
/// is not the direct sum of the two.
pub fn oblique_projector(x: &Subspace, y: &Subspace) -> Result<ObliqueProjector, LinopsError> {
    let n = x.ambient_dim();
    if y.ambient_dim() != n {
        return Err(LinopsError::DimensionMismatch(format!(
            "projector needs equal ambient dims, got {} and {}",
            n,
            y.ambient_dim()
        )));
    }
    if x.dim() + y.dim() != n {
        return Err(LinopsError::DimensionMismatch(format!(
            "dim X + dim Y = {} + {} must equal ambient dim {}",
            x.dim(),
            y.dim(),
            n
        )));
    }
    let mut stacked = CMat::zeros(n, n);
    stacked.columns_mut(0, x.dim()).copy_from(x.basis());
    stacked.columns_mut(x.dim(), y.dim()).copy_from(y.basis());

    let sv = crate::svdx::singular_values(&stacked);
    let (smax, smin) = (sv[0], sv[sv.len() - 1]);
    let ratio = if smax > 0.0 { smin / smax } else { 0.0 };
    if ratio < tol::COMPLEMENTARITY {
        return Err(LinopsError::NotComplementary {
            singular_ratio: ratio,
        });
    }

    // P = S · diag(I_r, 0) · S⁻¹, via one LU solve.
    let lu = stacked.clone().lu();
    let mut selector = CMat::zeros(n, n);
    for i in 0..x.dim() {
        selector[(i, i)] = crate::scalar::cr(1.0);
    }
    let inv = lu
        .solve(&CMat::identity(n, n))
        .ok_or(LinopsError::NotComplementary {
            singular_ratio: ratio,
        })?;
    let matrix = &stacked * selector * inv;
    let condition = spectral_norm(&matrix);

    Ok(ObliqueProjector {
        ambient_dim: n,
        range_basis: x.basis().clone(),
        nullspace_basis: y.basis().clone(),
        matrix,
        condition,
    })
}
