use thiserror::Error;

#[derive(Error, Debug, Clone)]
pub enum ComplexError {
    #[error("not a simplicial complex: missing {missing}")]
    NotAComplex { missing: String },

    #[error("cubical grid must have at least one cell per axis")]
    EmptyGrid,

    #[error("marking is not a subcomplex: {detail}")]
    NotSubcomplex { detail: String },

    #[error("local system is not flat: holonomy residual {residual:e}")]
    NotFlat { residual: f64 },

    #[error("wedge element has an even-degree component (degree {degree}); square zero is not guaranteed")]
    NotOdd { degree: usize },

    #[error("coboundaries are not integer matrices")]
    NonIntegerEntries,

    #[error("unknown fixture {name:?}")]
    UnknownFixture { name: String },

    #[error("parse error at line {line}: {message}")]
    ParseError { line: usize, message: String },

    #[error("operator is incompatible with the grading: {detail}")]
    DegreeIncompatible { detail: String },

    #[error(transparent)]
    Linops(#[from] crate::linops::LinopsError),
}
