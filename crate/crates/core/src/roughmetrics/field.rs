//! Metric field samplers.

use nalgebra::linalg::SymmetricEigen;

use super::MetricFieldError;
use crate::complexes::CubicalGrid;
use crate::rng::SplitMix64;
use crate::scalar::RMat;

/// Sampling law for a metric field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SamplerModel {
    /// `g = I` on every cell.
    Identity,
    /// `g = exp(S)` with symmetric Gaussian `S`, spectrum clamped into
    /// `[1/C_max, C_max]`.
    LogGaussian,
    /// The lacunar cosine-series metric `diag((2 + w(x₁))^{2/3}, 1, …)`.
    Weierstrass,
}

#[derive(Clone, Copy, Debug)]
pub struct SamplerConfig {
    pub seed: u64,
    pub model: SamplerModel,
    /// Ellipticity clamp `C_max ≥ 1`.
    pub clamp: f64,
    /// Truncation of the cosine series (number of retained terms).
    pub weierstrass_terms: usize,
}

impl SamplerConfig {
    pub fn identity() -> Self {
        Self {
            seed: 0,
            model: SamplerModel::Identity,
            clamp: 1.0,
            weierstrass_terms: 24,
        }
    }

    pub fn log_gaussian(seed: u64, clamp: f64) -> Self {
        assert!(clamp >= 1.0 && clamp.is_finite());
        Self {
            seed,
            model: SamplerModel::LogGaussian,
            clamp,
            weierstrass_terms: 24,
        }
    }
}

/// Per-cell SPD matrices over the top cells of a grid.
#[derive(Clone, Debug)]
pub struct MetricField {
    carrier: CubicalGrid,
    cells: Vec<RMat>,
    ellipticity: (f64, f64),
    provenance: String,
}

impl MetricField {
    pub fn carrier(&self) -> &CubicalGrid {
        &self.carrier
    }

    pub fn cell(&self, index: usize) -> &RMat {
        &self.cells[index]
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    /// `(c_lo, c_hi)` with `c_lo·I ⪯ g_c ⪯ c_hi·I` for every cell, recorded
    /// from the actual per-cell spectra.
    pub fn ellipticity(&self) -> (f64, f64) {
        self.ellipticity
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn from_cells(
        carrier: CubicalGrid,
        cells: Vec<RMat>,
        provenance: String,
    ) -> Result<Self, MetricFieldError> {
        let expected = carrier.cell_count(carrier.dim());
        if cells.len() != expected {
            return Err(MetricFieldError::CarrierMismatch);
        }
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for g in &cells {
            let eig = SymmetricEigen::new(g.clone());
            for &l in eig.eigenvalues.iter() {
                if !(l > 0.0) {
                    return Err(MetricFieldError::FactorNotElliptic {
                        detail: format!("cell matrix has eigenvalue {l}"),
                    });
                }
                lo = lo.min(l);
                hi = hi.max(l);
            }
        }
        Ok(Self {
            carrier,
            cells,
            ellipticity: (lo, hi),
            provenance,
        })
    }

    /// Textual serialization: header lines, then one row-major line per cell
    /// with 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let sizes: Vec<String> = self.carrier.sizes().iter().map(|s| s.to_string()).collect();
        let periodic: Vec<String> = self
            .carrier
            .periodic()
            .iter()
            .map(|p| if *p { "1".into() } else { "0".to_string() })
            .collect();
        let spacing: Vec<String> = self
            .carrier
            .spacing()
            .iter()
            .map(|s| format!("{s:.16e}"))
            .collect();
        out.push_str(&format!("carrier {} {}\n", sizes.join(","), periodic.join(",")));
        out.push_str(&format!("spacing {}\n", spacing.join(",")));
        out.push_str(&format!("provenance {}\n", self.provenance));
        for g in &self.cells {
            let entries: Vec<String> = (0..g.nrows())
                .flat_map(|i| (0..g.ncols()).map(move |j| (i, j)))
                .map(|(i, j)| format!("{:.16e}", g[(i, j)]))
                .collect();
            out.push_str(&entries.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Parse the textual serialization produced by [`MetricField::to_text`].
pub fn parse_metric_field(text: &str) -> Result<MetricField, MetricFieldError> {
    let mut lines = text.lines().enumerate();
    let parse_err = |line: usize, message: &str| MetricFieldError::ParseError {
        line: line + 1,
        message: message.to_string(),
    };
    let (l0, carrier_line) = lines.next().ok_or(parse_err(0, "missing carrier line"))?;
    let mut parts = carrier_line.split_whitespace();
    if parts.next() != Some("carrier") {
        return Err(parse_err(l0, "expected carrier line"));
    }
    let sizes: Vec<usize> = parts
        .next()
        .ok_or(parse_err(l0, "missing sizes"))?
        .split(',')
        .map(|t| t.parse().map_err(|_| parse_err(l0, "bad size")))
        .collect::<Result<_, _>>()?;
    let periodic: Vec<bool> = parts
        .next()
        .ok_or(parse_err(l0, "missing periodic flags"))?
        .split(',')
        .map(|t| match t {
            "1" => Ok(true),
            "0" => Ok(false),
            _ => Err(parse_err(l0, "bad periodic flag")),
        })
        .collect::<Result<_, _>>()?;
    let (l1, spacing_line) = lines.next().ok_or(parse_err(1, "missing spacing line"))?;
    let spacing: Vec<f64> = spacing_line
        .strip_prefix("spacing ")
        .ok_or(parse_err(l1, "expected spacing line"))?
        .split(',')
        .map(|t| t.parse().map_err(|_| parse_err(l1, "bad spacing")))
        .collect::<Result<_, _>>()?;
    let (_, provenance_line) = lines.next().ok_or(parse_err(2, "missing provenance"))?;
    let provenance = provenance_line
        .strip_prefix("provenance ")
        .unwrap_or("")
        .to_string();
    let grid = CubicalGrid::new(sizes, periodic)
        .map_err(MetricFieldError::Complex)?
        .with_spacing(spacing);
    let n = grid.dim();
    let mut cells = Vec::new();
    for (lineno, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let vals: Vec<f64> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| parse_err(lineno, "bad entry")))
            .collect::<Result<_, _>>()?;
        if vals.len() != n * n {
            return Err(parse_err(lineno, "wrong entry count"));
        }
        cells.push(RMat::from_fn(n, n, |i, j| vals[i * n + j]));
    }
    MetricField::from_cells(grid, cells, provenance)
}

/// Draw a metric field. Deterministic in the seed: every cell consumes an
/// independent keyed substream.
pub fn sample_metric_field(grid: &CubicalGrid, config: &SamplerConfig) -> MetricField {
    let n = grid.dim();
    let tops = grid.cell_count(n);
    let cells: Vec<RMat> = match config.model {
        SamplerModel::Identity => (0..tops).map(|_| RMat::identity(n, n)).collect(),
        SamplerModel::Weierstrass => {
            return weierstrass_metric(grid, config.weierstrass_terms);
        }
        SamplerModel::LogGaussian => {
            let sigma = config.clamp.ln() / 2.0;
            let log_clamp = config.clamp.ln();
            (0..tops)
                .map(|c| {
                    let mut rng = SplitMix64::keyed(config.seed, c as u64);
                    let mut s = RMat::zeros(n, n);
                    for i in 0..n {
                        for j in i..n {
                            let v = sigma * rng.next_normal();
                            s[(i, j)] = v;
                            s[(j, i)] = v;
                        }
                    }
                    let eig = SymmetricEigen::new(s);
                    let lambda: Vec<f64> = eig
                        .eigenvalues
                        .iter()
                        .map(|&v| v.clamp(-log_clamp, log_clamp).exp())
                        .collect();
                    let q = eig.eigenvectors;
                    let mut g = RMat::zeros(n, n);
                    for k in 0..n {
                        for i in 0..n {
                            for j in 0..n {
                                g[(i, j)] += lambda[k] * q[(i, k)] * q[(j, k)];
                            }
                        }
                    }
                    // exact symmetry
                    for i in 0..n {
                        for j in 0..i {
                            let avg = 0.5 * (g[(i, j)] + g[(j, i)]);
                            g[(i, j)] = avg;
                            g[(j, i)] = avg;
                        }
                    }
                    g
                })
                .collect()
        }
    };
    let provenance = format!(
        "model={:?} seed={} clamp={}",
        config.model, config.seed, config.clamp
    );
    MetricField::from_cells(grid.clone(), cells, provenance)
        .expect("sampled matrices are SPD by construction")
}

/// Truncated lacunar cosine series `Σ_{k<terms} 2^{-k} cos(14^k π x)`.
///
/// The partial sum is bounded by `2 − 2^{1−terms}`, so `2 + w` stays
/// strictly positive at every truncation.
pub fn weierstrass_sum(x: f64, terms: usize) -> f64 {
    let mut acc = 0.0;
    let mut amplitude = 1.0;
    let mut frequency = std::f64::consts::PI;
    for _ in 0..terms {
        acc += amplitude * (frequency * x).cos();
        amplitude *= 0.5;
        frequency *= 14.0;
    }
    acc
}

/// The rough metric `diag((2 + w(x₁))^{2/3}, 1, …)` sampled at top-cell
/// barycenters; supported on 1D and 2D grids.
pub fn weierstrass_metric(grid: &CubicalGrid, terms: usize) -> MetricField {
    assert!(terms >= 1);
    let n = grid.dim();
    assert!(n <= 2, "the lacunar metric is defined on 1D and 2D grids");
    let tops = grid.cells(n);
    let cells: Vec<RMat> = tops
        .iter()
        .map(|cell| {
            let x1 = grid.barycenter(cell)[0];
            let g11 = (2.0 + weierstrass_sum(x1, terms)).powf(2.0 / 3.0);
            let mut g = RMat::identity(n, n);
            g[(0, 0)] = g11;
            g
        })
        .collect();
    MetricField::from_cells(
        grid.clone(),
        cells,
        format!("model=Weierstrass terms={terms}"),
    )
    .expect("the truncated series keeps 2 + w positive")
}

/// Cellwise perturbation factors.
#[derive(Clone, Debug)]
pub enum PerturbFactor {
    UniformScalar(f64),
    PerCellScalar(Vec<f64>),
    PerCellMatrix(Vec<RMat>),
}

/// Apply a bounded elliptic factor cellwise: `g ↦ f·g` for scalars, or the
/// symmetric product `f^{1/2} g f^{1/2}` for matrix factors.
pub fn perturb_metric(
    field: &MetricField,
    factor: &PerturbFactor,
) -> Result<MetricField, MetricFieldError> {
    let n = field.carrier().dim();
    let cells: Result<Vec<RMat>, MetricFieldError> = (0..field.cell_count())
        .map(|c| {
            let g = field.cell(c);
            match factor {
                PerturbFactor::UniformScalar(f) => scalar_scale(g, *f),
                PerturbFactor::PerCellScalar(fs) => scalar_scale(g, fs[c]),
                PerturbFactor::PerCellMatrix(ms) => {
                    let m = &ms[c];
                    if m.nrows() != n || m.ncols() != n {
                        return Err(MetricFieldError::FactorNotElliptic {
                            detail: "factor dimension mismatch".into(),
                        });
                    }
                    let eig = SymmetricEigen::new(m.clone());
                    if eig.eigenvalues.iter().any(|&l| !(l > 0.0)) {
                        return Err(MetricFieldError::FactorNotElliptic {
                            detail: "matrix factor is not positive definite".into(),
                        });
                    }
                    let mut root = RMat::zeros(n, n);
                    for k in 0..n {
                        let s = eig.eigenvalues[k].sqrt();
                        for i in 0..n {
                            for j in 0..n {
                                root[(i, j)] +=
                                    s * eig.eigenvectors[(i, k)] * eig.eigenvectors[(j, k)];
                            }
                        }
                    }
                    Ok(&root * g * &root)
                }
            }
        })
        .collect();
    MetricField::from_cells(
        field.carrier().clone(),
        cells?,
        format!("{} (perturbed)", field.provenance()),
    )
}

fn scalar_scale(g: &RMat, f: f64) -> Result<RMat, MetricFieldError> {
    if !(f > 0.0) || !f.is_finite() {
        return Err(MetricFieldError::FactorNotElliptic {
            detail: format!("scalar factor {f}"),
        });
    }
    Ok(g * f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_8x8() -> CubicalGrid {
        CubicalGrid::unit_box(2, 8).unwrap()
    }

    #[test]
    fn identity_model() {
        let field = sample_metric_field(&grid_8x8(), &SamplerConfig::identity());
        assert_eq!(field.cell_count(), 64);
        assert_eq!(field.ellipticity(), (1.0, 1.0));
    }

    #[test]
    fn sampler_is_bitwise_deterministic() {
        let cfg = SamplerConfig::log_gaussian(7, 4.0);
        let a = sample_metric_field(&grid_8x8(), &cfg);
        let b = sample_metric_field(&grid_8x8(), &cfg);
        for c in 0..a.cell_count() {
            assert_eq!(a.cell(c), b.cell(c));
        }
    }

    #[test]
    fn sampled_spectra_respect_clamp() {
        let cfg = SamplerConfig::log_gaussian(7, 4.0);
        let field = sample_metric_field(&grid_8x8(), &cfg);
        let (lo, hi) = field.ellipticity();
        let slack = 1e-12;
        assert!(lo >= 0.25 * (1.0 - slack), "lo = {lo}");
        assert!(hi <= 4.0 * (1.0 + slack), "hi = {hi}");
    }

    #[test]
    fn weierstrass_anchor_values() {
        // cos(0) = 1 for every term: the partial sum at 0 is the exact
        // dyadic 2 − 2^{1−K}.
        let w24 = weierstrass_sum(0.0, 24);
        assert_eq!(w24, 2.0 - (0.5f64).powi(23));
        // Two-term sum at 0.
        assert_eq!(weierstrass_sum(0.0, 2), 1.5);
        // At x = 1 the k = 0 term is cos(π) = −1 and every higher frequency
        // is an even multiple of π, so the series tends to 0.
        assert!(weierstrass_sum(1.0, 24).abs() < 1e-3);
    }

    #[test]
    fn weierstrass_partial_sum_bound() {
        for terms in [1usize, 2, 8, 24] {
            let bound = 2.0 - (0.5f64).powi(terms as i32 - 1);
            for i in 0..400 {
                let x = i as f64 / 400.0;
                let w = weierstrass_sum(x, terms);
                assert!(
                    w.abs() <= bound * (1.0 + 1e-15) + 1e-15,
                    "bound violated at {x} with {terms} terms: {w}"
                );
            }
        }
    }

    #[test]
    fn weierstrass_metric_entries() {
        let grid = CubicalGrid::unit_box(2, 4).unwrap();
        let field = weierstrass_metric(&grid, 24);
        assert_eq!(field.cell_count(), 16);
        for c in 0..field.cell_count() {
            let g = field.cell(c);
            assert_eq!(g[(1, 1)], 1.0);
            assert_eq!(g[(0, 1)], 0.0);
            assert!(g[(0, 0)] > 0.0 && g[(0, 0)] < 4.0f64.powf(2.0 / 3.0) + 1e-9);
        }
        // limit anchor: at x₁ = 0 the metric entry approaches 4^{2/3}
        let at_zero = (2.0f64 + weierstrass_sum(0.0, 24)).powf(2.0 / 3.0);
        assert!((at_zero - 4.0f64.powf(2.0 / 3.0)).abs() < 1e-6);
    }

    #[test]
    fn perturbation_identity_and_rejection() {
        let field = sample_metric_field(&grid_8x8(), &SamplerConfig::identity());
        let same = perturb_metric(&field, &PerturbFactor::UniformScalar(1.0)).unwrap();
        for c in 0..field.cell_count() {
            assert_eq!(field.cell(c), same.cell(c));
        }
        assert!(matches!(
            perturb_metric(&field, &PerturbFactor::UniformScalar(0.0)),
            Err(MetricFieldError::FactorNotElliptic { .. })
        ));
    }

    #[test]
    fn serialization_roundtrip() {
        let cfg = SamplerConfig::log_gaussian(3, 2.0);
        let field = sample_metric_field(&grid_8x8(), &cfg);
        let text = field.to_text();
        let back = parse_metric_field(&text).unwrap();
        assert_eq!(back.cell_count(), field.cell_count());
        for c in 0..field.cell_count() {
            let a = field.cell(c);
            let b = back.cell(c);
            for i in 0..2 {
                for j in 0..2 {
                    assert!((a[(i, j)] - b[(i, j)]).abs() <= 1e-15 * a[(i, j)].abs());
                }
            }
        }
    }
}
