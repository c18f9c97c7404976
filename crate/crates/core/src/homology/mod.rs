//! Normalized chains, Smith normal form and integral homology with explicit
//! cycle representatives.

mod chains;
mod group;
pub mod snf;

pub use chains::{normalized_chains, ChainComplex};
pub use group::{
    degree_data_of, homology, homology_groups, homology_with, induced, induced_between, induced_with,
    is_acyclic, is_acyclic_with, is_homology_iso, is_homology_iso_with, iso_certificate_between, push_chain,
    verdict_for, Chain, Coefficients, DegreeData, DegreeVerdict, HomologyData, HomologyGroup, InducedMap,
    IsoCertificate,
};
pub use snf::smith_normal_form;
