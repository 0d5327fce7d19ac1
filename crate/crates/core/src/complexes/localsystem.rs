//! Flat local systems and twisted coboundaries.

use std::collections::BTreeMap;

use super::cochain::CochainComplex;
use super::error::ComplexError;
use super::simplicial::SimplicialComplex;
use super::sparse::SparseCMat;
use crate::scalar::{cr, max_abs, CMat, Scalar};
use crate::tol;

/// Invertible transports along oriented edges, with the convention
/// `ρ(e⁻¹) = ρ(e)⁻¹`. Transports are stored on the increasing orientation
/// `(a, b)` with `a < b`.
#[derive(Clone, Debug)]
pub struct LocalSystem {
    rank: usize,
    transports: BTreeMap<(usize, usize), CMat>,
}

impl LocalSystem {
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Scalar (rank-1) system from per-edge values, listed in the complex's
    /// lexicographic edge order.
    pub fn scalar(sc: &SimplicialComplex, values: &[Scalar]) -> Result<Self, ComplexError> {
        assert_eq!(values.len(), sc.simplices(1).len());
        let mut transports = BTreeMap::new();
        for (e, v) in sc.simplices(1).iter().zip(values) {
            if v.norm() == 0.0 {
                return Err(ComplexError::NotFlat { residual: f64::INFINITY });
            }
            transports.insert((e[0], e[1]), CMat::from_element(1, 1, *v));
        }
        Ok(Self {
            rank: 1,
            transports,
        })
    }

    /// Rank-r system from explicit per-edge matrices in lexicographic order.
    pub fn from_matrices(
        sc: &SimplicialComplex,
        rank: usize,
        matrices: &[CMat],
    ) -> Result<Self, ComplexError> {
        assert_eq!(matrices.len(), sc.simplices(1).len());
        let mut transports = BTreeMap::new();
        for (e, m) in sc.simplices(1).iter().zip(matrices) {
            if m.nrows() != rank || m.ncols() != rank {
                return Err(ComplexError::DegreeIncompatible {
                    detail: format!("transport on {e:?} is {}x{}", m.nrows(), m.ncols()),
                });
            }
            if m.clone().lu().try_inverse().is_none() {
                return Err(ComplexError::NotFlat { residual: f64::INFINITY });
            }
            transports.insert((e[0], e[1]), m.clone());
        }
        Ok(Self { rank, transports })
    }

    /// Gauge system ρ(a→b) = g_b g_a⁻¹ for invertible frames g_v; flat by
    /// construction.
    pub fn gauge(sc: &SimplicialComplex, frames: &[CMat]) -> Result<Self, ComplexError> {
        let rank = frames[0].nrows();
        let inverses: Vec<CMat> = frames
            .iter()
            .map(|g| {
                g.clone()
                    .lu()
                    .try_inverse()
                    .ok_or(ComplexError::NotFlat { residual: f64::INFINITY })
            })
            .collect::<Result<_, _>>()?;
        let matrices: Vec<CMat> = sc
            .simplices(1)
            .iter()
            .map(|e| &frames[e[1]] * &inverses[e[0]])
            .collect();
        Self::from_matrices(sc, rank, &matrices)
    }

    /// Transport along the oriented edge `from → to`.
    pub fn transport(&self, from: usize, to: usize) -> CMat {
        if from < to {
            self.transports[&(from, to)].clone()
        } else {
            self.transports[&(to, from)]
                .clone()
                .lu()
                .try_inverse()
                .expect("transports are invertible")
        }
    }

    /// Worst holonomy defect `‖ρ(v0→v2)⁻¹ ρ(v1→v2) ρ(v0→v1) − I‖` over the
    /// 2-simplices.
    pub fn flatness_residual(&self, sc: &SimplicialComplex) -> f64 {
        let id = CMat::identity(self.rank, self.rank);
        let mut worst: f64 = 0.0;
        for tri in sc.simplices(2) {
            let (v0, v1, v2) = (tri[0], tri[1], tri[2]);
            let hol = self.transport(v2, v0) * self.transport(v1, v2) * self.transport(v0, v1);
            worst = worst.max(max_abs(&(hol - &id)));
        }
        worst
    }

    /// Holonomy of the directed loop `v_0 → v_1 → … → v_0` (scalar systems).
    pub fn loop_holonomy(&self, cycle: &[usize]) -> Scalar {
        assert_eq!(self.rank, 1);
        let mut h = cr(1.0);
        for i in 0..cycle.len() {
            let from = cycle[i];
            let to = cycle[(i + 1) % cycle.len()];
            h *= self.transport(from, to)[(0, 0)];
        }
        h
    }
}

/// Twisted coboundary of a flat local system.
///
/// Cochains take values in `C^r`; on edges
/// `(d^ρ u)(v→w) = ρ(v→w) u(v) − u(w)`, and on a higher simplex the face
/// missing the last vertex is transported along its trailing edge:
/// `(d^ρ u)(v_0…v_{k+1}) = (−1)^k ρ(v_k→v_{k+1}) u(v_0…v_k)
///   − Σ_{i≤k} (−1)^i u(∂_i)`.
/// Flatness makes the square vanish; a non-flat system is rejected before
/// assembly.
pub fn twisted_coboundary(
    sc: &SimplicialComplex,
    system: &LocalSystem,
) -> Result<CochainComplex, ComplexError> {
    let residual = system.flatness_residual(sc);
    if residual > tol::FLATNESS {
        return Err(ComplexError::NotFlat { residual });
    }
    let r = system.rank();
    let dims: Vec<usize> = sc.counts().iter().map(|&n| n * r).collect();
    let mut coboundaries = Vec::new();
    for k in 0..sc.dim() {
        let rows = sc.simplices(k + 1);
        let mut d = SparseCMat::new(rows.len() * r, sc.simplices(k).len() * r);
        for (row, tau) in rows.iter().enumerate() {
            let last = tau.len() - 1;
            for omit in 0..tau.len() {
                let mut face = tau.clone();
                face.remove(omit);
                let col = sc.index_of(k, &face).expect("closed complex");
                let sign = if omit % 2 == 0 { -1.0 } else { 1.0 };
                if omit == last {
                    let rho = system.transport(tau[last - 1], tau[last]);
                    for a in 0..r {
                        for b in 0..r {
                            d.push(row * r + a, col * r + b, cr(sign) * rho[(a, b)]);
                        }
                    }
                } else {
                    for a in 0..r {
                        d.push(row * r + a, col * r + a, cr(sign));
                    }
                }
            }
        }
        coboundaries.push(d);
    }
    Ok(CochainComplex::from_complex(dims, coboundaries))
}

/// Per-degree Betti numbers of a twisted complex from numerical ranks.
pub fn twisted_betti(complex: &CochainComplex) -> Vec<usize> {
    let policy = crate::linops::TolPolicy::default();
    let count = complex.degree_count();
    let mut ranks = vec![0usize; count];
    for k in 0..count - 1 {
        let d = complex.coboundary_dense(k);
        if d.nrows() == 0 || d.ncols() == 0 {
            continue;
        }
        let sv = crate::svdx::singular_values(&d);
        ranks[k] = crate::linops::rank_decision(&sv, d.nrows(), d.ncols(), &policy).rank;
    }
    (0..count)
        .map(|k| {
            let out = if k < count - 1 { ranks[k] } else { 0 };
            let into = if k > 0 { ranks[k - 1] } else { 0 };
            complex.dims()[k] - out - into
        })
        .collect()
}
