//! Induced per-degree weights and mutual-bound transfer.

use nalgebra::linalg::{Cholesky, SymmetricEigen};

use super::field::{MetricField, SamplerConfig, SamplerModel};
use super::MetricFieldError;
use crate::complexes::CubicalGrid;
use crate::linops::{certify_metric, mutual_bound, Metric};
use crate::rng::SplitMix64;
use crate::scalar::{c, cr, CMat, RMat};

/// Per-degree SPD weight forms on the cochain spaces of a complex.
#[derive(Clone, Debug)]
pub struct WeightSpec {
    forms: Vec<Metric>,
    /// Diagonal weights when the forms were induced from a field.
    diagonal: Option<Vec<Vec<f64>>>,
    provenance: String,
}

impl WeightSpec {
    pub fn degree_count(&self) -> usize {
        self.forms.len()
    }

    pub fn form(&self, k: usize) -> &Metric {
        &self.forms[k]
    }

    pub fn forms(&self) -> &[Metric] {
        &self.forms
    }

    pub fn diagonal(&self, k: usize) -> Option<&[f64]> {
        self.diagonal.as_ref().map(|d| d[k].as_slice())
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn dims(&self) -> Vec<usize> {
        self.forms.iter().map(|f| f.dim()).collect()
    }

    /// Block-diagonal metric on the total graded space, degrees ascending.
    pub fn total_form(&self) -> Metric {
        let total: usize = self.dims().iter().sum();
        let mut b = CMat::zeros(total, total);
        let mut at = 0usize;
        for f in &self.forms {
            let m = f.matrix();
            for i in 0..m.nrows() {
                for j in 0..m.ncols() {
                    b[(at + i, at + j)] = m[(i, j)];
                }
            }
            at += m.nrows();
        }
        certify_metric(&b).expect("block diagonal of SPD blocks is SPD")
    }

    pub fn identity(dims: &[usize]) -> Self {
        Self {
            forms: dims
                .iter()
                .map(|&n| crate::linops::MetricForm::identity(n))
                .collect(),
            diagonal: Some(dims.iter().map(|&n| vec![1.0; n]).collect()),
            provenance: "identity".into(),
        }
    }
}

/// Weight of every k-cell: `det[(g⁻¹)_{I,I}] · √det(g) · vol(cell)` with the
/// metric taken from the anchor top cell.
pub fn induce_cell_weights(field: &MetricField, grid: &CubicalGrid, k: usize) -> Vec<f64> {
    let vol = grid.top_cell_volume();
    grid.cells(k)
        .iter()
        .map(|cell| {
            let g = field.cell(grid.anchor_top_cell(cell));
            let det = g.determinant();
            let inv = g.clone().try_inverse().expect("field matrices are SPD");
            let minor = principal_minor(&inv, cell.axes);
            minor * det.sqrt() * vol
        })
        .collect()
}

fn principal_minor(m: &RMat, axes: u32) -> f64 {
    let idx: Vec<usize> = (0..m.nrows()).filter(|i| axes & (1 << i) != 0).collect();
    match idx.len() {
        0 => 1.0,
        1 => m[(idx[0], idx[0])],
        _ => {
            let sub = RMat::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])]);
            sub.determinant()
        }
    }
}

/// Induce diagonal per-degree weight forms from a field; the field must live
/// on the given grid.
pub fn induce_weights(
    field: &MetricField,
    grid: &CubicalGrid,
) -> Result<WeightSpec, MetricFieldError> {
    if field.carrier() != grid {
        return Err(MetricFieldError::CarrierMismatch);
    }
    let mut diagonal = Vec::with_capacity(grid.dim() + 1);
    let mut forms = Vec::with_capacity(grid.dim() + 1);
    for k in 0..=grid.dim() {
        let theta = induce_cell_weights(field, grid, k);
        let b = CMat::from_fn(theta.len(), theta.len(), |i, j| {
            if i == j {
                cr(theta[i])
            } else {
                cr(0.0)
            }
        });
        forms.push(certify_metric(&b)?);
        diagonal.push(theta);
    }
    Ok(WeightSpec {
        forms,
        diagonal: Some(diagonal),
        provenance: format!("induced from {}", field.provenance()),
    })
}

/// Random dense per-degree SPD forms with spectra in `[1/clamp, clamp]`,
/// for complexes without a geometric carrier.
pub fn sample_weight_spec(dims: &[usize], config: &SamplerConfig) -> WeightSpec {
    match config.model {
        SamplerModel::Identity => WeightSpec::identity(dims),
        _ => {
            let forms = dims
                .iter()
                .enumerate()
                .map(|(k, &n)| {
                    let mut rng = SplitMix64::keyed(config.seed, k as u64);
                    let g = CMat::from_fn(n, n, |_, _| c(rng.next_normal(), rng.next_normal()));
                    let q = g.qr().q();
                    let log_clamp = config.clamp.ln();
                    let lambda: Vec<f64> = (0..n)
                        .map(|_| rng.uniform(-log_clamp, log_clamp).exp())
                        .collect();
                    let mut b = CMat::zeros(n, n);
                    for kk in 0..n {
                        let col = q.column(kk);
                        for i in 0..n {
                            for j in 0..n {
                                b[(i, j)] += col[i] * col[j].conj() * cr(lambda[kk]);
                            }
                        }
                    }
                    certify_metric(&crate::scalar::hermitize(&b))
                        .expect("unitary conjugation of a positive diagonal is SPD")
                })
                .collect();
            WeightSpec {
                forms,
                diagonal: None,
                provenance: format!("sampled seed={} clamp={}", config.seed, config.clamp),
            }
        }
    }
}

/// Mutual bound of two SPD matrices from the real symmetric pencil.
fn cell_mutual_bound(g1: &RMat, g2: &RMat) -> f64 {
    let chol = Cholesky::new(g1.clone()).expect("field matrices are SPD");
    let l = chol.l();
    let x = l.solve_lower_triangular(g2).expect("nonsingular");
    let m = l.solve_lower_triangular(&x.transpose()).expect("nonsingular");
    let sym = 0.5 * (&m + m.transpose());
    let eig = SymmetricEigen::new(sym);
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for &v in eig.eigenvalues.iter() {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    hi.sqrt().max(1.0 / lo.sqrt())
}

#[derive(Clone, Debug)]
pub struct TransferDegree {
    pub degree: usize,
    pub constant: f64,
    pub bound: f64,
}

impl TransferDegree {
    pub fn within(&self) -> bool {
        self.constant <= self.bound * (1.0 + 1e-9)
    }
}

/// Mutual-bound transfer report: the cellwise field constant and the induced
/// per-degree constants against the proven exponent `(n + 2k)/2`.
#[derive(Clone, Debug)]
pub struct TransferReport {
    pub c_field: f64,
    pub per_degree: Vec<TransferDegree>,
}

impl TransferReport {
    pub fn within(&self) -> bool {
        self.per_degree.iter().all(|d| d.within())
    }
}

pub fn transfer_bound_check(
    field1: &MetricField,
    field2: &MetricField,
    grid: &CubicalGrid,
) -> Result<TransferReport, MetricFieldError> {
    if field1.carrier() != grid || field2.carrier() != grid {
        return Err(MetricFieldError::CarrierMismatch);
    }
    let n = grid.dim();
    let mut c_field: f64 = 1.0;
    for c in 0..field1.cell_count() {
        c_field = c_field.max(cell_mutual_bound(field1.cell(c), field2.cell(c)));
    }
    let w1 = induce_weights(field1, grid)?;
    let w2 = induce_weights(field2, grid)?;
    let per_degree = (0..=n)
        .map(|k| {
            let constant = mutual_bound(w1.form(k), w2.form(k))
                .expect("equal dims by construction")
                .constant;
            let exponent = (n as f64 + 2.0 * k as f64) / 2.0;
            TransferDegree {
                degree: k,
                constant,
                bound: c_field.powf(exponent),
            }
        })
        .collect();
    Ok(TransferReport {
        c_field,
        per_degree,
    })
}
