//! Simplicial complexes, their coboundaries, and the built-in fixtures.

use std::collections::BTreeSet;

use super::error::ComplexError;
use super::sparse::SparseIntMat;

/// A finite abstract simplicial complex. Simplices are strictly increasing
/// vertex tuples, listed per dimension in lexicographic order; orientation is
/// the one induced by vertex order.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    vertex_count: usize,
    /// `simplices[k]` lists the k-simplices.
    simplices: Vec<Vec<Vec<usize>>>,
}

impl SimplicialComplex {
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Topological dimension (largest k with a k-simplex).
    pub fn dim(&self) -> usize {
        self.simplices.len().saturating_sub(1)
    }

    pub fn simplices(&self, k: usize) -> &[Vec<usize>] {
        self.simplices
            .get(k)
            .map(|v| v.as_slice())
            .unwrap_or(&[])
    }

    pub fn counts(&self) -> Vec<usize> {
        self.simplices.iter().map(|s| s.len()).collect()
    }

    pub fn index_of(&self, k: usize, simplex: &[usize]) -> Option<usize> {
        self.simplices
            .get(k)?
            .binary_search_by(|s| s.as_slice().cmp(simplex))
            .ok()
    }

    /// Build from a list of top cells (mixed dimensions allowed); all faces
    /// are generated.
    pub fn from_top_cells(cells: &[Vec<usize>]) -> Result<Self, ComplexError> {
        let mut per_dim: Vec<BTreeSet<Vec<usize>>> = Vec::new();
        for cell in cells {
            let sorted = normalize_simplex(cell)?;
            insert_with_faces(&mut per_dim, &sorted);
        }
        Ok(Self::from_sets(per_dim))
    }

    /// Build from explicit per-dimension simplex lists; fails with
    /// `NotAComplex` when any face is missing.
    pub fn from_listed_simplices(lists: &[Vec<Vec<usize>>]) -> Result<Self, ComplexError> {
        let mut per_dim: Vec<BTreeSet<Vec<usize>>> = Vec::new();
        for (k, list) in lists.iter().enumerate() {
            let mut set = BTreeSet::new();
            for s in list {
                let sorted = normalize_simplex(s)?;
                if sorted.len() != k + 1 {
                    return Err(ComplexError::NotAComplex {
                        missing: format!("simplex {sorted:?} listed at dimension {k}"),
                    });
                }
                set.insert(sorted);
            }
            per_dim.push(set);
        }
        for k in 1..per_dim.len() {
            for s in &per_dim[k] {
                for omit in 0..s.len() {
                    let mut face = s.clone();
                    face.remove(omit);
                    if !per_dim[k - 1].contains(&face) {
                        return Err(ComplexError::NotAComplex {
                            missing: format!("face {face:?} of {s:?}"),
                        });
                    }
                }
            }
        }
        Ok(Self::from_sets(per_dim))
    }

    fn from_sets(per_dim: Vec<BTreeSet<Vec<usize>>>) -> Self {
        let simplices: Vec<Vec<Vec<usize>>> = per_dim
            .into_iter()
            .map(|set| set.into_iter().collect())
            .collect();
        let vertex_count = simplices
            .first()
            .map(|verts| verts.iter().map(|v| v[0] + 1).max().unwrap_or(0))
            .unwrap_or(0);
        Self {
            vertex_count,
            simplices,
        }
    }

    /// Alternating-sign coboundary `d_k`: rows index (k+1)-simplices, columns
    /// k-simplices, with `(du)(τ) = Σ_i (-1)^i u(τ \ v_i)`.
    pub fn coboundary(&self, k: usize) -> SparseIntMat {
        let rows = self.simplices(k + 1);
        let cols = self.simplices(k);
        let mut d = SparseIntMat::new(rows.len(), cols.len());
        for (r, tau) in rows.iter().enumerate() {
            let mut sign = 1i64;
            for omit in 0..tau.len() {
                let mut face = tau.clone();
                face.remove(omit);
                let c = self
                    .index_of(k, &face)
                    .expect("complex is closed under faces");
                d.push(r, c, sign);
                sign = -sign;
            }
        }
        d
    }

    pub fn all_coboundaries(&self) -> Vec<SparseIntMat> {
        (0..self.dim()).map(|k| self.coboundary(k)).collect()
    }

    /// True when `other`'s simplices are all contained in `self`.
    pub fn contains(&self, other: &SimplicialComplex) -> bool {
        other.simplices.iter().enumerate().all(|(k, list)| {
            list.iter().all(|s| self.index_of(k, s).is_some())
        })
    }
}

fn normalize_simplex(s: &[usize]) -> Result<Vec<usize>, ComplexError> {
    let mut sorted = s.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != s.len() {
        return Err(ComplexError::NotAComplex {
            missing: format!("repeated vertex in {s:?}"),
        });
    }
    Ok(sorted)
}

fn insert_with_faces(per_dim: &mut Vec<BTreeSet<Vec<usize>>>, simplex: &[usize]) {
    let k = simplex.len() - 1;
    while per_dim.len() <= k {
        per_dim.push(BTreeSet::new());
    }
    if !per_dim[k].insert(simplex.to_vec()) {
        return;
    }
    if k == 0 {
        return;
    }
    for omit in 0..simplex.len() {
        let mut face = simplex.to_vec();
        face.remove(omit);
        insert_with_faces(per_dim, &face);
    }
}

/// Parse the plain-text complex format: one top simplex per line as
/// whitespace-separated vertex labels, `#` starts a comment.
pub fn parse_complex_text(text: &str) -> Result<SimplicialComplex, ComplexError> {
    let mut cells = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut cell = Vec::new();
        for token in line.split_whitespace() {
            let v: usize = token.parse().map_err(|_| ComplexError::ParseError {
                line: lineno + 1,
                message: format!("bad vertex label {token:?}"),
            })?;
            cell.push(v);
        }
        cells.push(cell);
    }
    if cells.is_empty() {
        return Err(ComplexError::ParseError {
            line: 0,
            message: "no simplices listed".into(),
        });
    }
    SimplicialComplex::from_top_cells(&cells)
}

// ---------------------------------------------------------------------------
// Fixtures
// ---------------------------------------------------------------------------

/// Two vertices joined by an edge.
pub fn path_2() -> SimplicialComplex {
    SimplicialComplex::from_top_cells(&[vec![0, 1]]).unwrap()
}

/// The n-cycle graph.
pub fn cycle(n: usize) -> SimplicialComplex {
    assert!(n >= 3, "a cycle needs at least 3 vertices");
    let mut cells: Vec<Vec<usize>> = (0..n - 1).map(|i| vec![i, i + 1]).collect();
    cells.push(vec![0, n - 1]);
    SimplicialComplex::from_top_cells(&cells).unwrap()
}

/// Octahedron boundary: vertices 0..6 with opposite pairs (0,3), (1,4),
/// (2,5); the 8 faces avoid opposite pairs.
pub fn octahedron() -> SimplicialComplex {
    let mut faces = Vec::new();
    for a in [0usize, 3] {
        for b in [1usize, 4] {
            for c in [2usize, 5] {
                faces.push(vec![a, b, c]);
            }
        }
    }
    SimplicialComplex::from_top_cells(&faces).unwrap()
}

/// The solid ball obtained by coning the octahedron surface from a new apex
/// vertex 6: one tetrahedron per face.
pub fn ball_cone_octahedron() -> SimplicialComplex {
    let surface = octahedron();
    let mut cells = Vec::new();
    for tri in surface.simplices(2) {
        let mut tet = tri.clone();
        tet.push(6);
        cells.push(tet);
    }
    SimplicialComplex::from_top_cells(&cells).unwrap()
}

/// Minimal 7-vertex triangulated torus: triangles {i, i+1, i+3} and
/// {i, i+2, i+3} mod 7.
pub fn torus_triangulated() -> SimplicialComplex {
    let mut cells = Vec::new();
    for i in 0..7usize {
        cells.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
        cells.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
    }
    SimplicialComplex::from_top_cells(&cells).unwrap()
}

/// Resolve a fixture by name; `cycle_<n>` is accepted for n ≥ 3.
pub fn fixture(name: &str) -> Result<SimplicialComplex, ComplexError> {
    match name {
        "path_2" => Ok(path_2()),
        "octahedron" => Ok(octahedron()),
        "ball_cone_octahedron" => Ok(ball_cone_octahedron()),
        "torus_triangulated" => Ok(torus_triangulated()),
        _ => {
            if let Some(n) = name.strip_prefix("cycle_") {
                let n: usize = n.parse().map_err(|_| ComplexError::UnknownFixture {
                    name: name.to_string(),
                })?;
                if n < 3 {
                    return Err(ComplexError::UnknownFixture {
                        name: name.to_string(),
                    });
                }
                return Ok(cycle(n));
            }
            Err(ComplexError::UnknownFixture {
                name: name.to_string(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_dims_and_coboundary() {
        let c = path_2();
        assert_eq!(c.counts(), vec![2, 1]);
        let d0 = c.coboundary(0).to_dense();
        assert_eq!(d0[(0, 0)], crate::scalar::cr(-1.0));
        assert_eq!(d0[(0, 1)], crate::scalar::cr(1.0));
    }

    #[test]
    fn octahedron_counts() {
        let c = octahedron();
        assert_eq!(c.counts(), vec![6, 12, 8]);
    }

    #[test]
    fn ball_cone_counts() {
        let c = ball_cone_octahedron();
        assert_eq!(c.counts(), vec![7, 18, 20, 8]);
    }

    #[test]
    fn torus_counts() {
        let c = torus_triangulated();
        assert_eq!(c.counts(), vec![7, 21, 14]);
    }

    #[test]
    fn coboundaries_square_to_zero_exactly() {
        for c in [octahedron(), ball_cone_octahedron(), torus_triangulated()] {
            let ds = c.all_coboundaries();
            for k in 0..ds.len() - 1 {
                assert!(ds[k + 1].product_is_zero(&ds[k]), "d{}d{} != 0", k + 1, k);
            }
        }
    }

    #[test]
    fn listed_simplices_require_faces() {
        let bad = vec![
            vec![vec![0], vec![1]],
            vec![vec![0, 1], vec![1, 2]],
        ];
        assert!(matches!(
            SimplicialComplex::from_listed_simplices(&bad),
            Err(ComplexError::NotAComplex { .. })
        ));
    }

    #[test]
    fn text_format_roundtrip() {
        let text = "# octahedron, one face per line\n0 1 2\n0 1 5\n0 4 2\n0 4 5\n3 1 2\n3 1 5\n3 4 2\n3 4 5\n";
        let c = parse_complex_text(text).unwrap();
        assert_eq!(c.counts(), vec![6, 12, 8]);
        assert!(matches!(
            parse_complex_text("0 x 2\n"),
            Err(ComplexError::ParseError { line: 1, .. })
        ));
    }

    #[test]
    fn fixture_names_resolve() {
        assert_eq!(fixture("cycle_5").unwrap().counts(), vec![5, 5]);
        assert!(fixture("klein_bottle").is_err());
    }
}
