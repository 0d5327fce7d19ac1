//! Degree decompositions of the ambient space.

use crate::scalar::{cr, CMat};

/// A partition of the ambient coordinates into degree groups
/// `H_0 ⊕ … ⊕ H_n`. Groups need not be contiguous index ranges (parity
/// coarsenings merge them), so each group is held as a sorted index list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedStructure {
    total_dim: usize,
    parts: Vec<Vec<usize>>,
}

impl GradedStructure {
    /// Consecutive degree blocks of the given sizes.
    pub fn from_dims(dims: &[usize]) -> Self {
        let mut parts = Vec::with_capacity(dims.len());
        let mut offset = 0;
        for &d in dims {
            parts.push((offset..offset + d).collect());
            offset += d;
        }
        Self {
            total_dim: offset,
            parts,
        }
    }

    /// Build from explicit index groups; panics unless they partition
    /// `0..total_dim`.
    pub fn from_parts(total_dim: usize, parts: Vec<Vec<usize>>) -> Self {
        let mut seen = vec![false; total_dim];
        for p in &parts {
            for &i in p {
                assert!(i < total_dim && !seen[i], "parts must partition the space");
                seen[i] = true;
            }
        }
        assert!(seen.iter().all(|&s| s), "parts must be exhaustive");
        let parts = parts
            .into_iter()
            .map(|mut p| {
                p.sort_unstable();
                p
            })
            .collect();
        Self { total_dim, parts }
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn degree_count(&self) -> usize {
        self.parts.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.parts.iter().map(|p| p.len()).collect()
    }

    pub fn indices(&self, k: usize) -> &[usize] {
        &self.parts[k]
    }

    /// Idempotent 0/1 coordinate projector onto `H_k`.
    pub fn projector(&self, k: usize) -> CMat {
        let mut p = CMat::zeros(self.total_dim, self.total_dim);
        for &i in &self.parts[k] {
            p[(i, i)] = cr(1.0);
        }
        p
    }

    /// Extract the block of `m` mapping `H_j` into `H_i`.
    pub fn block(&self, m: &CMat, i: usize, j: usize) -> CMat {
        let rows = &self.parts[i];
        let cols = &self.parts[j];
        CMat::from_fn(rows.len(), cols.len(), |r, c| m[(rows[r], cols[c])])
    }

    /// Scatter a `H_j`-indexed block of columns into ambient coordinates.
    pub fn embed_columns(&self, k: usize, block: &CMat) -> CMat {
        let rows = &self.parts[k];
        let mut out = CMat::zeros(self.total_dim, block.ncols());
        for (r, &i) in rows.iter().enumerate() {
            for c in 0..block.ncols() {
                out[(i, c)] = block[(r, c)];
            }
        }
        out
    }

    /// Merge degree groups into even ⊕ odd.
    pub fn coarsen_parity(&self) -> GradedStructure {
        let mut even = Vec::new();
        let mut odd = Vec::new();
        for (k, p) in self.parts.iter().enumerate() {
            if k % 2 == 0 {
                even.extend_from_slice(p);
            } else {
                odd.extend_from_slice(p);
            }
        }
        even.sort_unstable();
        odd.sort_unstable();
        Self {
            total_dim: self.total_dim,
            parts: vec![even, odd],
        }
    }
}
