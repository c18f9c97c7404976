//! Finite simplicial sets stored by nondegenerate generators.

mod construct;
mod map;
mod product;
mod pushout;
mod set;
mod simplex;

pub use construct::{
    binary_icosahedral, boundary, delta_map, delta_simplex, delta_vertices, nerve_of_poset, parse_word, polygon,
    polygon_covering, presentation_complex, presentation_complex_from_text, reduce_word, representing_map,
    standard_simplex, standard_simplex_truncated, suspension, Word,
};
pub use map::SimplicialMap;
pub use product::{product, pullback, PullbackIndex, TupleSet};
pub use pushout::{closure, disjoint_union, full_subcomplex, pushout, subcomplex, Coproduct, Pushout, Subcomplex};
pub use set::{Builder, Generator, Label, Operator, SimplicialSet, ValidationReport, Violation};
pub use simplex::{codegeneracy, coface, degeneracies, factor, order_maps, Degeneracy, OrderMap, SimplexRef, MAX_DIM};
