//! Exterior algebra Λ(Cⁿ) and wedge multipliers.
//!
//! The basis is indexed by subsets of {0,…,n−1} and ordered by
//! (degree, bitmask), so form degrees occupy contiguous blocks and the
//! standard grading applies directly.

use super::error::ComplexError;
use crate::hodge::GradedStructure;
use crate::linops::{certify_nilpotent, NilpotentOperator};
use crate::scalar::{CMat, Scalar};
use crate::tol;

/// Λ(Cⁿ) with a fixed odd wedge element ω.
#[derive(Clone, Debug)]
pub struct KoszulModel {
    n: usize,
    /// basis_masks[i] is the subset for basis slot i.
    basis_masks: Vec<u32>,
    /// slot_of[mask] inverts basis_masks.
    slot_of: Vec<usize>,
    /// Coefficients of ω per subset mask.
    omega: Vec<Scalar>,
}

impl KoszulModel {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ambient_dim(&self) -> usize {
        1 << self.n
    }

    pub fn omega(&self) -> &[Scalar] {
        &self.omega
    }

    /// Basis slot of a subset mask.
    pub fn slot(&self, mask: u32) -> usize {
        self.slot_of[mask as usize]
    }

    /// Form-degree grading H_0 ⊕ … ⊕ H_n.
    pub fn grading(&self) -> GradedStructure {
        let mut dims = vec![0usize; self.n + 1];
        for &m in &self.basis_masks {
            dims[m.count_ones() as usize] += 1;
        }
        GradedStructure::from_dims(&dims)
    }

    /// Even ⊕ odd coarsening, the grading that every odd wedge multiplier
    /// swaps.
    pub fn parity_grading(&self) -> GradedStructure {
        self.grading().coarsen_parity()
    }

    /// Matrix of `x ↦ η ∧ x` for an arbitrary element η (by subset mask).
    pub fn wedge_matrix(&self, eta: &[Scalar]) -> CMat {
        let dim = self.ambient_dim();
        assert_eq!(eta.len(), dim);
        let mut m = CMat::zeros(dim, dim);
        for (i_mask, coeff) in eta.iter().enumerate() {
            if coeff.norm_sqr() == 0.0 {
                continue;
            }
            let i_mask = i_mask as u32;
            for j_mask in 0..dim as u32 {
                if i_mask & j_mask != 0 {
                    continue;
                }
                let sign = wedge_sign(i_mask, j_mask);
                let row = self.slot(i_mask | j_mask);
                let col = self.slot(j_mask);
                m[(row, col)] += *coeff * crate::scalar::cr(sign);
            }
        }
        m
    }
}

/// Sign of e_I ∧ e_J: parity of the pairs (i, j) ∈ I×J with i > j.
fn wedge_sign(i_mask: u32, j_mask: u32) -> f64 {
    let mut inversions = 0u32;
    let mut i = i_mask;
    while i != 0 {
        let bit = i.trailing_zeros();
        // elements of J strictly below this element of I
        inversions += (j_mask & ((1u32 << bit) - 1)).count_ones();
        i &= i - 1;
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Build Λ(Cⁿ) with the wedge multiplier `e(ω)` for an odd element ω given by
/// subset-mask coefficients; rejects any even-degree component, since only
/// odd elements square to zero.
pub fn koszul_wedge(
    n: usize,
    omega: &[Scalar],
) -> Result<(KoszulModel, NilpotentOperator), ComplexError> {
    let dim = 1usize << n;
    assert_eq!(omega.len(), dim, "omega needs one coefficient per subset");
    for (mask, coeff) in omega.iter().enumerate() {
        if coeff.norm_sqr() != 0.0 && (mask as u32).count_ones() % 2 == 0 {
            return Err(ComplexError::NotOdd {
                degree: (mask as u32).count_ones() as usize,
            });
        }
    }
    let mut basis_masks: Vec<u32> = (0..dim as u32).collect();
    basis_masks.sort_by_key(|m| (m.count_ones(), *m));
    let mut slot_of = vec![0usize; dim];
    for (slot, &mask) in basis_masks.iter().enumerate() {
        slot_of[mask as usize] = slot;
    }
    let model = KoszulModel {
        n,
        basis_masks,
        slot_of,
        omega: omega.to_vec(),
    };
    let matrix = model.wedge_matrix(omega);
    let op = certify_nilpotent(&matrix, tol::NILPOTENCY)?;
    Ok((model, op))
}

/// Convenience: ω as a single basis monomial `e_{i_1} ∧ … ∧ e_{i_k}`.
pub fn monomial(n: usize, indices: &[usize]) -> Vec<Scalar> {
    let mut omega = vec![crate::scalar::cr(0.0); 1 << n];
    let mut mask = 0u32;
    for &i in indices {
        assert!(i < n);
        mask |= 1 << i;
    }
    assert_eq!(mask.count_ones() as usize, indices.len());
    omega[mask as usize] = crate::scalar::cr(1.0);
    omega
}
