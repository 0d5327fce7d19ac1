//! Mesh-refinement divergence study for the codifferential of a fixed smooth
//! 1-form under a rough metric.
//!
//! On the unit square with N×N cells, the form `ω = η dx¹` (η the mollifier
//! plateau below) is sampled at edge barycenters, the metric field induces
//! diagonal weights `θ₀`, `θ₁`, and the ratio
//!
//! ```text
//! r = ‖δ_B ω‖_{B₀} / ‖ω‖_{B₁},   δ_B = B₀⁻¹ d₀ᵀ B₁,
//! ```
//!
//! is tracked across dyadic refinements. Smooth coefficients give a
//! convergent sequence; the nowhere-differentiable lacunar metric makes the
//! difference quotients inside δ grow like a negative power of h, so the
//! sequence increases strictly.
//!
//! Everything here stays sparse: only diagonal weights and one incidence
//! transpose-multiply per level.

use hodge_core::complexes::CubicalGrid;
use hodge_core::roughmetrics::{induce_cell_weights, weierstrass_metric, MetricField};
use hodge_core::scalar::RMat;

use crate::report::RefineRow;
use crate::scenario::RefineModel;

/// C^∞ plateau: 0 outside [1/8, 7/8], 1 on [1/4, 3/4], glued by the standard
/// mollifier step `s(t) = e(t)/(e(t) + e(1-t))`, `e(t) = exp(-1/t)`.
pub fn plateau(t: f64) -> f64 {
    fn e(t: f64) -> f64 {
        if t > 0.0 {
            (-1.0 / t).exp()
        } else {
            0.0
        }
    }
    fn step(t: f64) -> f64 {
        let a = e(t);
        let b = e(1.0 - t);
        a / (a + b)
    }
    if !(0.125..=0.875).contains(&t) {
        0.0
    } else if (0.25..=0.75).contains(&t) {
        1.0
    } else if t < 0.25 {
        step((t - 0.125) / 0.125)
    } else {
        step((0.875 - t) / 0.125)
    }
}

/// `η(x, y)`: product plateau, equal to 1 on the inner half `[1/4, 3/4]²`.
pub fn bump(x: f64, y: f64) -> f64 {
    plateau(x) * plateau(y)
}

fn field_for(model: RefineModel, grid: &CubicalGrid, terms: usize) -> MetricField {
    match model {
        RefineModel::Weierstrass => weierstrass_metric(grid, terms),
        RefineModel::Smooth => {
            let g = RMat::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]);
            let tops = grid.cell_count(2);
            MetricField::from_cells(grid.clone(), vec![g; tops], "smooth diag(2,1)".into())
                .expect("constant SPD field")
        }
    }
}

/// One level of the study.
pub fn divergence_ratio(model: RefineModel, n: usize, terms: usize) -> f64 {
    let grid = CubicalGrid::unit_box(2, n).expect("n >= 1");
    let field = field_for(model, &grid, terms);
    let theta0 = induce_cell_weights(&field, &grid, 0);
    let theta1 = induce_cell_weights(&field, &grid, 1);

    // ω = η dx¹ at edge barycenters: x-directed edges carry η, y-edges 0.
    let edges = grid.cells(1);
    let mut omega = vec![0.0f64; edges.len()];
    for (i, cell) in edges.iter().enumerate() {
        if cell.axes == 0b01 {
            let b = grid.barycenter(cell);
            omega[i] = bump(b[0], b[1]);
        }
    }

    let weighted: Vec<f64> = omega
        .iter()
        .zip(&theta1)
        .map(|(w, t)| w * t)
        .collect();
    let d0 = grid.coboundary(0);
    let pulled = d0.apply_transpose_f64(&weighted);
    let norm_omega_sq: f64 = omega
        .iter()
        .zip(&theta1)
        .map(|(w, t)| t * w * w)
        .sum();
    let norm_delta_sq: f64 = pulled
        .iter()
        .zip(&theta0)
        .map(|(v, t)| v * v / t)
        .sum();
    // The incidence transpose produces undivided differences; one spacing
    // factor turns them into difference quotients, i.e. the codifferential
    // at mesh scale.
    let h = grid.spacing()[0];
    (norm_delta_sq / norm_omega_sq).sqrt() / h
}

/// Run the dyadic study `N = base·2^j`, j = 0..levels.
pub fn refine_study(model: RefineModel, base: usize, levels: usize, terms: usize) -> Vec<RefineRow> {
    let mut rows = Vec::with_capacity(levels);
    let mut prev: Option<f64> = None;
    for j in 0..levels {
        let n = base << j;
        let r = divergence_ratio(model, n, terms);
        let slope = prev.map(|p| (r / p).log2()).unwrap_or(0.0);
        rows.push(RefineRow {
            level: j,
            n,
            r,
            slope,
        });
        prev = Some(r);
    }
    rows
}

/// Strictly increasing across all levels?
pub fn strictly_increasing(rows: &[RefineRow]) -> bool {
    rows.windows(2).all(|w| w[1].r > w[0].r)
}

/// Final successive ratio within `tol` of 1?
pub fn stabilized(rows: &[RefineRow], tol: f64) -> bool {
    match rows.len() {
        0 | 1 => false,
        n => {
            let ratio = rows[n - 1].r / rows[n - 2].r;
            (ratio - 1.0).abs() <= tol
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plateau_shape() {
        assert_eq!(plateau(0.0), 0.0);
        assert_eq!(plateau(0.1), 0.0);
        assert_eq!(plateau(0.5), 1.0);
        assert_eq!(plateau(0.25), 1.0);
        assert_eq!(plateau(0.75), 1.0);
        assert_eq!(plateau(0.9), 0.0);
        let mid = plateau(0.1875);
        assert!(mid > 0.0 && mid < 1.0);
        // symmetric ramps
        assert!((plateau(0.1875) - plateau(0.8125)).abs() < 1e-12);
    }

    #[test]
    fn smooth_control_converges_quickly() {
        let rows = refine_study(RefineModel::Smooth, 16, 3, 24);
        assert!(stabilized(&rows, 0.05), "{rows:?}");
    }

    #[test]
    fn closed_and_coclosed_form_has_zero_ratio() {
        // On a periodic grid with a constant metric, the constant 1-form
        // dx¹ is closed and coclosed: the weighted codifferential vanishes
        // identically at every resolution.
        use hodge_core::complexes::CubicalGrid;
        use hodge_core::roughmetrics::{induce_cell_weights, MetricField};
        for n in [8usize, 16, 32] {
            let grid = CubicalGrid::new(vec![n, n], vec![true, true])
                .unwrap()
                .with_spacing(vec![1.0 / n as f64; 2]);
            let g = RMat::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]);
            let field =
                MetricField::from_cells(grid.clone(), vec![g; n * n], "constant".into()).unwrap();
            let theta1 = induce_cell_weights(&field, &grid, 1);
            let edges = grid.cells(1);
            let weighted: Vec<f64> = edges
                .iter()
                .zip(&theta1)
                .map(|(cell, t)| if cell.axes == 0b01 { *t } else { 0.0 })
                .collect();
            let pulled = grid.coboundary(0).apply_transpose_f64(&weighted);
            let worst = pulled.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
            assert!(worst <= 1e-14, "n = {n}: residual {worst}");
        }
    }

    #[test]
    fn lacunar_metric_diverges_at_small_scale() {
        // The roughness only outruns the bump's smooth gradient once the
        // mesh resolves the second cosine scale, so the study starts at 32.
        let rows = refine_study(RefineModel::Weierstrass, 32, 3, 24);
        assert!(strictly_increasing(&rows), "{rows:?}");
    }
}
