//! Exact Smith normal form over the integers.
//!
//! This is the ground-truth oracle for every Betti claim made elsewhere in
//! the crate, so it runs in arbitrary-precision arithmetic: ranks and torsion
//! coefficients are exact regardless of entry growth during elimination.
//! Pivots are chosen by minimal magnitude to keep growth mild.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::sparse::SparseIntMat;

/// Diagonal of the Smith normal form: nonzero invariant factors
/// `d_1 | d_2 | …`, each positive.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub invariant_factors: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    /// Factors greater than one: the torsion part of the cokernel.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors
            .iter()
            .filter(|d| **d > BigInt::from(1))
            .cloned()
            .collect()
    }
}

/// Smith normal form of a dense integer matrix.
pub fn smith_normal_form(matrix: &[Vec<i64>]) -> SmithForm {
    let nrows = matrix.len();
    let ncols = if nrows == 0 { 0 } else { matrix[0].len() };
    let mut m: Vec<Vec<BigInt>> = matrix
        .iter()
        .map(|row| row.iter().map(|&v| BigInt::from(v)).collect())
        .collect();

    let mut factors: Vec<BigInt> = Vec::new();
    let mut t = 0usize;

    while t < nrows && t < ncols {
        // Pivot: smallest nonzero magnitude in the trailing block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if !m[i][j].is_zero() {
                    match pivot {
                        None => pivot = Some((i, j)),
                        Some((pi, pj)) => {
                            if m[i][j].abs() < m[pi][pj].abs() {
                                pivot = Some((i, j));
                            }
                        }
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }

        // Clear row and column t by repeated remainder reduction.
        loop {
            let mut dirty = false;
            for i in (t + 1)..nrows {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = &m[i][t] / &m[t][t];
                if !q.is_zero() {
                    for j in t..ncols {
                        let sub = &q * &m[t][j];
                        m[i][j] -= sub;
                    }
                }
                if !m[i][t].is_zero() {
                    // Remainder became the smaller pivot candidate.
                    m.swap(t, i);
                    dirty = true;
                }
            }
            for j in (t + 1)..ncols {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = &m[t][j] / &m[t][t];
                if !q.is_zero() {
                    for i in t..nrows {
                        let sub = &q * &m[i][t];
                        m[i][j] -= sub;
                    }
                }
                if !m[t][j].is_zero() {
                    for i in t..nrows {
                        let tmp = m[i][t].clone();
                        m[i][t] = m[i][j].clone();
                        m[i][j] = tmp;
                    }
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }

        // Divisibility fix-up: d_t must divide every trailing entry.
        let mut retry = false;
        'outer: for i in (t + 1)..nrows {
            for j in (t + 1)..ncols {
                if !(&m[i][j] % &m[t][t]).is_zero() {
                    for jj in t..ncols {
                        let add = m[i][jj].clone();
                        m[t][jj] += add;
                    }
                    retry = true;
                    break 'outer;
                }
            }
        }
        if retry {
            continue;
        }

        factors.push(m[t][t].abs());
        t += 1;
    }

    SmithForm {
        invariant_factors: factors,
    }
}

/// Exact rank over the integers (equals the rational rank).
pub fn integer_rank(matrix: &SparseIntMat) -> usize {
    smith_normal_form(&matrix.to_dense_i64()).rank()
}
