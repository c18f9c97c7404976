//! Simplicial categories, diagrams over them, the bisimplicial Borel
//! construction, thick realization and the group-completion pipeline.

mod category;
mod completion;
mod construction;
mod space;

pub use category::{restriction_diagram, trivial_diagram, Diagram, MonoidTable, Morphism, SimplicialCategory};
pub use completion::{group_completion_check, Gate, GroupCompletionReport};
pub use construction::{
    borel_level, borel_total, classifying_space, nerve_space, strings, telescope, telescope_diagram, BorelSpace,
    BorelTotal, MorphString, Telescope,
};
pub use space::{realize_map, thick_realize, Realization, SimplicialSpace};
