//! Homology fibrations, group completion and barycentric subdivision over
//! finite simplicial sets, with exact integral homology.

pub mod borel;
pub mod error;
pub mod fibration;
pub mod homology;
pub mod sset;
pub mod subdivision;

pub use error::{Error, Result};
pub use sset::{SimplexRef, SimplicialMap, SimplicialSet};
