//! Sparse triplet matrices used at assembly time.
//!
//! Coboundaries are assembled sparsely so large refinement grids stay cheap;
//! dense conversion happens only when an operator enters the dense linear
//! algebra layer.

use crate::scalar::{cr, CMat, Scalar};

/// Integer matrix in triplet form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseIntMat {
    pub nrows: usize,
    pub ncols: usize,
    pub triplets: Vec<(u32, u32, i64)>,
}

impl SparseIntMat {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            triplets: Vec::new(),
        }
    }

    pub fn push(&mut self, row: usize, col: usize, val: i64) {
        debug_assert!(row < self.nrows && col < self.ncols);
        if val != 0 {
            self.triplets.push((row as u32, col as u32, val));
        }
    }

    pub fn to_dense(&self) -> CMat {
        let mut m = CMat::zeros(self.nrows, self.ncols);
        for &(r, c, v) in &self.triplets {
            m[(r as usize, c as usize)] += cr(v as f64);
        }
        m
    }

    pub fn to_dense_i64(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0i64; self.ncols]; self.nrows];
        for &(r, c, v) in &self.triplets {
            m[r as usize][c as usize] += v;
        }
        m
    }

    /// `y = A x` over i128; exact for incidence-scale entries.
    pub fn apply_i128(&self, x: &[i128]) -> Vec<i128> {
        let mut y = vec![0i128; self.nrows];
        for &(r, c, v) in &self.triplets {
            y[r as usize] += v as i128 * x[c as usize];
        }
        y
    }

    /// `y = A x` in f64.
    pub fn apply_f64(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.nrows];
        for &(r, c, v) in &self.triplets {
            y[r as usize] += v as f64 * x[c as usize];
        }
        y
    }

    /// `y = Aᵀ x` in f64.
    pub fn apply_transpose_f64(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.ncols];
        for &(r, c, v) in &self.triplets {
            y[c as usize] += v as f64 * x[r as usize];
        }
        y
    }

    /// Exact product `self · other` over i128, returned dense.
    pub fn multiply_dense_i128(&self, other: &SparseIntMat) -> Vec<Vec<i128>> {
        assert_eq!(self.ncols, other.nrows);
        let mut out = vec![vec![0i128; other.ncols]; self.nrows];
        // index other by row
        let mut by_row: Vec<Vec<(u32, i64)>> = vec![Vec::new(); other.nrows];
        for &(r, c, v) in &other.triplets {
            by_row[r as usize].push((c, v));
        }
        for &(r, k, v) in &self.triplets {
            for &(c, w) in &by_row[k as usize] {
                out[r as usize][c as usize] += v as i128 * w as i128;
            }
        }
        out
    }

    /// True when `self · other` is exactly the zero matrix.
    pub fn product_is_zero(&self, other: &SparseIntMat) -> bool {
        self.multiply_dense_i128(other)
            .iter()
            .all(|row| row.iter().all(|&v| v == 0))
    }
}

/// Complex matrix in triplet form (twisted coboundaries).
#[derive(Clone, Debug)]
pub struct SparseCMat {
    pub nrows: usize,
    pub ncols: usize,
    pub triplets: Vec<(u32, u32, Scalar)>,
}

impl SparseCMat {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            triplets: Vec::new(),
        }
    }

    pub fn push(&mut self, row: usize, col: usize, val: Scalar) {
        debug_assert!(row < self.nrows && col < self.ncols);
        if val.norm_sqr() != 0.0 {
            self.triplets.push((row as u32, col as u32, val));
        }
    }

    pub fn to_dense(&self) -> CMat {
        let mut m = CMat::zeros(self.nrows, self.ncols);
        for &(r, c, v) in &self.triplets {
            m[(r as usize, c as usize)] += v;
        }
        m
    }
}
