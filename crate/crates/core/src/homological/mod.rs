//! Homological algebra over F₂: graded algebra presentations, bigraded
//! complexes, simplicial graded vector spaces with normalized complexes, and
//! bar/Tor machinery.

pub mod algebra;
pub mod bar;
pub mod complex;
pub mod simplicial_vs;

pub use algebra::{
    lambda, poly, square_zero, tensor_algebra, tensor_inclusion_left, AlgebraError, AlgebraMap,
    GradedAlgebraPresentation, GradedModule,
};
pub use bar::{bar_complex, bar_simplicial_object, bar_words, tensor_over_algebra_dims, tor, BarWord, TorTable};
pub use complex::{BigradedComplex, Homology};
pub use simplicial_vs::{GradedMap, NormalizedComplex, SimplicialError, SimplicialGradedVS};
