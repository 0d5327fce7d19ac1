//! Generators of graded nilpotent operators and the integer homology oracle.

mod cochain;
mod cubical;
mod error;
mod koszul;
mod localsystem;
mod simplicial;
mod smith;
mod sparse;

pub use cochain::{
    betti_smith, cup_product_operator, integer_rank_of_coboundary, magnet_operator,
    relative_complex, BettiReport, BoundaryMarking, Coboundaries, CochainComplex,
};
pub use cubical::{build_cubical, Cell, CubicalGrid};
pub use error::ComplexError;
pub use koszul::{koszul_wedge, monomial, KoszulModel};
pub use localsystem::{twisted_betti, twisted_coboundary, LocalSystem};
pub use simplicial::{
    ball_cone_octahedron, cycle, fixture, octahedron, parse_complex_text, path_2,
    torus_triangulated, SimplicialComplex,
};
pub use smith::{integer_rank, smith_normal_form, SmithForm};
pub use sparse::{SparseCMat, SparseIntMat};

/// Build a cochain complex from a named fixture.
pub fn build_simplicial(name: &str) -> Result<CochainComplex, ComplexError> {
    let sc = fixture(name)?;
    Ok(CochainComplex::from_simplicial(&sc))
}
