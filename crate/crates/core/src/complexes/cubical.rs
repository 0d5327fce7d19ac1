//! Cubical grids and their coboundaries, with optional periodic axes.

use super::cochain::CochainComplex;
use super::error::ComplexError;
use super::sparse::SparseIntMat;

/// A structured grid on a box. `sizes[i]` counts cells along axis `i`;
/// periodic axes identify the two ends. `spacing[i]` is the physical cell
/// extent used for volumes and barycenters.
#[derive(Clone, Debug, PartialEq)]
pub struct CubicalGrid {
    sizes: Vec<usize>,
    periodic: Vec<bool>,
    spacing: Vec<f64>,
}

/// A k-cell: the subset of axes the cell extends along, and the lattice
/// position of its lowest corner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub axes: u32,
    pub position: Vec<usize>,
}

impl CubicalGrid {
    pub fn new(sizes: Vec<usize>, periodic: Vec<bool>) -> Result<Self, ComplexError> {
        if sizes.is_empty() || sizes.iter().any(|&s| s == 0) {
            return Err(ComplexError::EmptyGrid);
        }
        assert_eq!(sizes.len(), periodic.len());
        let spacing = vec![1.0; sizes.len()];
        Ok(Self {
            sizes,
            periodic,
            spacing,
        })
    }

    pub fn with_spacing(mut self, spacing: Vec<f64>) -> Self {
        assert_eq!(spacing.len(), self.sizes.len());
        self.spacing = spacing;
        self
    }

    /// Unit box [0,1]^d with n cells per side.
    pub fn unit_box(dim: usize, n: usize) -> Result<Self, ComplexError> {
        Ok(Self::new(vec![n; dim], vec![false; dim])?
            .with_spacing(vec![1.0 / n as f64; dim]))
    }

    pub fn dim(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn periodic(&self) -> &[bool] {
        &self.periodic
    }

    pub fn spacing(&self) -> &[f64] {
        &self.spacing
    }

    /// Positions along axis `i` available to cells extended (`true`) or flat
    /// (`false`) along it.
    fn axis_positions(&self, axis: usize, extended: bool) -> usize {
        if extended || self.periodic[axis] {
            self.sizes[axis]
        } else {
            self.sizes[axis] + 1
        }
    }

    /// Number of k-cells.
    pub fn cell_count(&self, k: usize) -> usize {
        self.axis_subsets(k)
            .into_iter()
            .map(|axes| self.subset_count(axes))
            .sum()
    }

    fn subset_count(&self, axes: u32) -> usize {
        (0..self.dim())
            .map(|i| self.axis_positions(i, axes & (1 << i) != 0))
            .product()
    }

    fn axis_subsets(&self, k: usize) -> Vec<u32> {
        let mut subsets: Vec<u32> = (0u32..1 << self.dim())
            .filter(|m| m.count_ones() as usize == k)
            .collect();
        subsets.sort_unstable();
        subsets
    }

    /// Dense index of a k-cell: subsets in increasing mask order, positions
    /// lexicographic with the last axis fastest.
    pub fn cell_index(&self, cell: &Cell) -> usize {
        let k = cell.axes.count_ones() as usize;
        let mut index = 0usize;
        for axes in self.axis_subsets(k) {
            if axes == cell.axes {
                let mut offset = 0usize;
                for i in 0..self.dim() {
                    offset = offset * self.axis_positions(i, axes & (1 << i) != 0)
                        + cell.position[i];
                }
                return index + offset;
            }
            index += self.subset_count(axes);
        }
        unreachable!("valid cell");
    }

    /// Enumerate all k-cells in index order.
    pub fn cells(&self, k: usize) -> Vec<Cell> {
        let mut out = Vec::with_capacity(self.cell_count(k));
        for axes in self.axis_subsets(k) {
            let ranges: Vec<usize> = (0..self.dim())
                .map(|i| self.axis_positions(i, axes & (1 << i) != 0))
                .collect();
            let mut position = vec![0usize; self.dim()];
            loop {
                out.push(Cell {
                    axes,
                    position: position.clone(),
                });
                // odometer, last axis fastest
                let mut axis = self.dim();
                loop {
                    if axis == 0 {
                        break;
                    }
                    axis -= 1;
                    position[axis] += 1;
                    if position[axis] < ranges[axis] {
                        break;
                    }
                    position[axis] = 0;
                }
                if position.iter().all(|&p| p == 0) {
                    break;
                }
            }
        }
        out
    }

    /// Barycenter in physical coordinates.
    pub fn barycenter(&self, cell: &Cell) -> Vec<f64> {
        (0..self.dim())
            .map(|i| {
                let extended = cell.axes & (1 << i) != 0;
                let offset = if extended { 0.5 } else { 0.0 };
                (cell.position[i] as f64 + offset) * self.spacing[i]
            })
            .collect()
    }

    /// Volume of a top cell.
    pub fn top_cell_volume(&self) -> f64 {
        self.spacing.iter().product()
    }

    /// The adjacent top cell of smallest index containing the given k-cell;
    /// per axis the smaller valid corner is preferred.
    pub fn anchor_top_cell(&self, cell: &Cell) -> usize {
        let mut position = Vec::with_capacity(self.dim());
        for i in 0..self.dim() {
            if cell.axes & (1 << i) != 0 {
                position.push(cell.position[i]);
            } else {
                let p = cell.position[i];
                let candidate_low = if p > 0 {
                    Some(p - 1)
                } else if self.periodic[i] {
                    // wrapped neighbour sits at the top end; the unwrapped
                    // candidate p is the smaller index
                    None
                } else {
                    None
                };
                let low_valid = candidate_low.is_some();
                let high_valid = p < self.sizes[i];
                position.push(match (low_valid, high_valid) {
                    (true, true) => candidate_low.unwrap().min(p),
                    (true, false) => candidate_low.unwrap(),
                    (false, true) => p,
                    (false, false) => (self.sizes[i] - 1).min(p),
                });
            }
        }
        let top = Cell {
            axes: (1 << self.dim()) - 1,
            position,
        };
        // index within top cells only
        let mut offset = 0usize;
        for i in 0..self.dim() {
            offset = offset * self.sizes[i] + top.position[i];
        }
        offset
    }

    /// Signed coboundary `d_k`: rows index (k+1)-cells; the face pair along
    /// axis `j ∈ J` contributes `(-1)^{pos(j, J)} (u(q + e_j) - u(q))`.
    pub fn coboundary(&self, k: usize) -> SparseIntMat {
        let rows = self.cells(k + 1);
        let mut d = SparseIntMat::new(self.cell_count(k + 1), self.cell_count(k));
        for tau in rows.iter() {
            let r = self.cell_index(tau);
            // map (k+1)-cell index back densely: recompute since rows are in
            // index order anyway
            let mut sign = 1i64;
            for j in 0..self.dim() {
                if tau.axes & (1 << j) == 0 {
                    continue;
                }
                let face_axes = tau.axes & !(1 << j);
                let low = Cell {
                    axes: face_axes,
                    position: tau.position.clone(),
                };
                let mut high_pos = tau.position.clone();
                high_pos[j] += 1;
                if self.periodic[j] {
                    high_pos[j] %= self.sizes[j];
                }
                let high = Cell {
                    axes: face_axes,
                    position: high_pos,
                };
                d.push(r, self.cell_index(&high), sign);
                d.push(r, self.cell_index(&low), -sign);
                sign = -sign;
            }
        }
        d
    }

    pub fn all_coboundaries(&self) -> Vec<SparseIntMat> {
        (0..self.dim()).map(|k| self.coboundary(k)).collect()
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.dim()).map(|k| self.cell_count(k)).collect()
    }

    pub fn to_cochain_complex(&self) -> CochainComplex {
        CochainComplex::from_integer(self.dims(), self.all_coboundaries())
    }
}

/// Build a cochain complex from grid sizes and periodic flags.
pub fn build_cubical(
    sizes: &[usize],
    periodic: &[bool],
) -> Result<CochainComplex, ComplexError> {
    Ok(CubicalGrid::new(sizes.to_vec(), periodic.to_vec())?.to_cochain_complex())
}
