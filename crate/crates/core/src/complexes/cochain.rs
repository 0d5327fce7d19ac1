//! Graded cochain complexes and operators derived from them.

use num_bigint::BigInt;

use super::error::ComplexError;
use super::simplicial::SimplicialComplex;
use super::smith::{integer_rank, smith_normal_form};
use super::sparse::{SparseCMat, SparseIntMat};
use crate::hodge::GradedStructure;
use crate::linops::{certify_nilpotent, NilpotentOperator};
use crate::scalar::{CMat, Scalar};
use crate::tol;

/// Coboundary data: exact integer for untwisted complexes, complex for
/// local-system twists.
#[derive(Clone, Debug)]
pub enum Coboundaries {
    Integer(Vec<SparseIntMat>),
    Complex(Vec<SparseCMat>),
}

/// A graded cochain complex: per-degree dimensions and coboundaries
/// `d_k : H_k → H_{k+1}` with `d_{k+1} d_k = 0`.
///
/// The total operator stacks the `d_k` as the block subdiagonal of the
/// degree-ascending layout (`H_0` occupies the leading coordinates).
#[derive(Clone, Debug)]
pub struct CochainComplex {
    grading: GradedStructure,
    dims: Vec<usize>,
    coboundaries: Coboundaries,
}

impl CochainComplex {
    pub fn from_integer(dims: Vec<usize>, coboundaries: Vec<SparseIntMat>) -> Self {
        debug_assert_eq!(coboundaries.len() + 1, dims.len());
        for (k, d) in coboundaries.iter().enumerate() {
            debug_assert_eq!(d.ncols, dims[k]);
            debug_assert_eq!(d.nrows, dims[k + 1]);
        }
        Self {
            grading: GradedStructure::from_dims(&dims),
            dims,
            coboundaries: Coboundaries::Integer(coboundaries),
        }
    }

    pub fn from_complex(dims: Vec<usize>, coboundaries: Vec<SparseCMat>) -> Self {
        Self {
            grading: GradedStructure::from_dims(&dims),
            dims,
            coboundaries: Coboundaries::Complex(coboundaries),
        }
    }

    pub fn from_simplicial(sc: &SimplicialComplex) -> Self {
        Self::from_integer(sc.counts(), sc.all_coboundaries())
    }

    pub fn grading(&self) -> &GradedStructure {
        &self.grading
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn degree_count(&self) -> usize {
        self.dims.len()
    }

    pub fn is_integer(&self) -> bool {
        matches!(self.coboundaries, Coboundaries::Integer(_))
    }

    pub fn integer_coboundaries(&self) -> Option<&[SparseIntMat]> {
        match &self.coboundaries {
            Coboundaries::Integer(ds) => Some(ds),
            Coboundaries::Complex(_) => None,
        }
    }

    /// Dense `d_k`.
    pub fn coboundary_dense(&self, k: usize) -> CMat {
        match &self.coboundaries {
            Coboundaries::Integer(ds) => ds[k].to_dense(),
            Coboundaries::Complex(ds) => ds[k].to_dense(),
        }
    }

    /// The stacked operator with `d_k` in block `(k+1, k)`, certified
    /// square-zero (exactly, for integer data).
    pub fn total_gamma(&self) -> Result<NilpotentOperator, ComplexError> {
        let n = self.total_dim();
        let mut gamma = CMat::zeros(n, n);
        let mut offset = 0usize;
        for k in 0..self.degree_count() - 1 {
            let d = self.coboundary_dense(k);
            let row0 = offset + self.dims[k];
            for i in 0..d.nrows() {
                for j in 0..d.ncols() {
                    gamma[(row0 + i, offset + j)] = d[(i, j)];
                }
            }
            offset += self.dims[k];
        }
        Ok(certify_nilpotent(&gamma, tol::NILPOTENCY)?)
    }

    /// Exact integer check that `d_{k+1} d_k = 0` for every degree.
    pub fn verify_exactness(&self) -> bool {
        match &self.coboundaries {
            Coboundaries::Integer(ds) => (0..ds.len().saturating_sub(1))
                .all(|k| ds[k + 1].product_is_zero(&ds[k])),
            Coboundaries::Complex(ds) => {
                for k in 0..ds.len().saturating_sub(1) {
                    let prod = ds[k + 1].to_dense() * ds[k].to_dense();
                    let hi = crate::scalar::max_abs(&prod);
                    let scale = crate::scalar::max_abs(&ds[k + 1].to_dense())
                        * crate::scalar::max_abs(&ds[k].to_dense());
                    if hi > tol::NILPOTENCY * scale.max(1.0) {
                        return false;
                    }
                }
                true
            }
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }
}

/// Per-degree Betti numbers with torsion coefficients (informational).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiReport {
    pub betti: Vec<usize>,
    /// `torsion[k]` are the invariant factors > 1 of `d_{k-1}`: the torsion
    /// of the degree-k integral cohomology.
    pub torsion: Vec<Vec<BigInt>>,
}

/// Exact integer homology oracle: `β_k = n_k − rank d_k − rank d_{k−1}`
/// via Smith normal form.
pub fn betti_smith(c: &CochainComplex) -> Result<BettiReport, ComplexError> {
    let Some(ds) = c.integer_coboundaries() else {
        return Err(ComplexError::NonIntegerEntries);
    };
    let forms: Vec<_> = ds
        .iter()
        .map(|d| smith_normal_form(&d.to_dense_i64()))
        .collect();
    let mut betti = Vec::with_capacity(c.degree_count());
    let mut torsion = Vec::with_capacity(c.degree_count());
    for k in 0..c.degree_count() {
        let rank_out = if k < forms.len() { forms[k].rank() } else { 0 };
        let rank_in = if k > 0 { forms[k - 1].rank() } else { 0 };
        betti.push(c.dims()[k] - rank_out - rank_in);
        torsion.push(if k > 0 {
            forms[k - 1].torsion()
        } else {
            Vec::new()
        });
    }
    Ok(BettiReport { betti, torsion })
}

/// Exact integer rank of `d_k`.
pub fn integer_rank_of_coboundary(c: &CochainComplex, k: usize) -> Option<usize> {
    c.integer_coboundaries().map(|ds| integer_rank(&ds[k]))
}

/// Marked simplices per dimension: a boundary subcomplex.
#[derive(Clone, Debug, Default)]
pub struct BoundaryMarking {
    pub marked: Vec<Vec<Vec<usize>>>,
}

impl BoundaryMarking {
    pub fn empty() -> Self {
        Self { marked: Vec::new() }
    }

    pub fn from_subcomplex(sub: &SimplicialComplex) -> Self {
        Self {
            marked: (0..=sub.dim()).map(|k| sub.simplices(k).to_vec()).collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.marked.iter().all(|m| m.is_empty())
    }
}

/// Delete the cochains supported on a boundary subcomplex, computing the
/// relative complex. The marking must be closed under faces; the restricted
/// coboundaries then still square to zero exactly.
pub fn relative_complex(
    sc: &SimplicialComplex,
    marking: &BoundaryMarking,
) -> Result<CochainComplex, ComplexError> {
    // Validate: every marked simplex exists, and the marked set is closed
    // under faces.
    let mut keep: Vec<Vec<bool>> = (0..=sc.dim())
        .map(|k| vec![true; sc.simplices(k).len()])
        .collect();
    for (k, list) in marking.marked.iter().enumerate() {
        for s in list {
            let mut sorted = s.clone();
            sorted.sort_unstable();
            let idx = sc.index_of(k, &sorted).ok_or(ComplexError::NotSubcomplex {
                detail: format!("marked simplex {sorted:?} is not in the complex"),
            })?;
            keep[k][idx] = false;
        }
    }
    for k in 1..keep.len() {
        for (idx, &kept) in keep[k].iter().enumerate() {
            if kept {
                continue;
            }
            let tau = &sc.simplices(k)[idx];
            for omit in 0..tau.len() {
                let mut face = tau.clone();
                face.remove(omit);
                let fidx = sc.index_of(k - 1, &face).expect("complex closed");
                if keep[k - 1][fidx] {
                    return Err(ComplexError::NotSubcomplex {
                        detail: format!("face {face:?} of marked {tau:?} is unmarked"),
                    });
                }
            }
        }
    }

    // Old index -> new index per degree.
    let remap: Vec<Vec<Option<usize>>> = keep
        .iter()
        .map(|flags| {
            let mut next = 0usize;
            flags
                .iter()
                .map(|&f| {
                    if f {
                        let idx = next;
                        next += 1;
                        Some(idx)
                    } else {
                        None
                    }
                })
                .collect()
        })
        .collect();
    let dims: Vec<usize> = keep
        .iter()
        .map(|flags| flags.iter().filter(|&&f| f).count())
        .collect();

    let mut coboundaries = Vec::new();
    for k in 0..sc.dim() {
        let full = sc.coboundary(k);
        let mut d = SparseIntMat::new(dims[k + 1], dims[k]);
        for &(r, c, v) in &full.triplets {
            if let (Some(nr), Some(nc)) = (remap[k + 1][r as usize], remap[k][c as usize]) {
                d.push(nr, nc, v);
            }
        }
        coboundaries.push(d);
    }
    Ok(CochainComplex::from_integer(dims, coboundaries))
}

/// Certify a perturbed operator `Γ + W` as a nilpotent "magnet".
///
/// `W` must raise degree with respect to the grading (strictly block-lower in
/// the ascending layout); the square-zero gate is what separates admissible
/// perturbations (odd exterior multipliers) from inadmissible ones (generic
/// cup-product multipliers, whose squares survive at the cochain level).
pub fn magnet_operator(
    gamma: &NilpotentOperator,
    w: &CMat,
    grading: &GradedStructure,
) -> Result<NilpotentOperator, ComplexError> {
    let n = gamma.dim();
    if w.nrows() != n || w.ncols() != n || grading.total_dim() != n {
        return Err(ComplexError::DegreeIncompatible {
            detail: format!(
                "magnet needs {}x{} perturbation over the same grading, got {}x{}",
                n,
                n,
                w.nrows(),
                w.ncols()
            ),
        });
    }
    let scale = crate::scalar::max_abs(w);
    for i in 0..grading.degree_count() {
        for j in 0..grading.degree_count() {
            if i > j {
                continue; // degree-raising blocks are allowed
            }
            let block = grading.block(w, i, j);
            if crate::scalar::max_abs(&block) > 1e-14 * scale.max(1.0) {
                return Err(ComplexError::DegreeIncompatible {
                    detail: format!("perturbation has a non-raising block ({i}, {j})"),
                });
            }
        }
    }
    let candidate = gamma.matrix() + w;
    Ok(certify_nilpotent(&candidate, tol::NILPOTENCY)?)
}

/// Matrix of the simplicial cup product `u ↦ α ⌣ u` on the total cochain
/// space, for a 1-cochain `α` given by its values on the (sorted) edges:
/// `(α ⌣ u)(v_0 … v_{k+1}) = α(v_0 v_1) · u(v_1 … v_{k+1})`.
pub fn cup_product_operator(sc: &SimplicialComplex, alpha: &[Scalar]) -> CMat {
    assert_eq!(alpha.len(), sc.simplices(1).len());
    let complex = CochainComplex::from_simplicial(sc);
    let n = complex.total_dim();
    let grading = complex.grading();
    let mut w = CMat::zeros(n, n);
    for k in 0..sc.dim() {
        let rows = sc.simplices(k + 1);
        for (r, tau) in rows.iter().enumerate() {
            let leading_edge = [tau[0], tau[1]];
            let e = sc.index_of(1, &leading_edge).expect("closed complex");
            let back: Vec<usize> = tau[1..].to_vec();
            let c = sc.index_of(k, &back).expect("closed complex");
            let row = grading.indices(k + 1)[r];
            let col = grading.indices(k)[c];
            w[(row, col)] += alpha[e];
        }
    }
    w
}
