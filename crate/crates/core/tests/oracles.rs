mod common;

use std::sync::Arc;

use hofib::borel::{classifying_space, MonoidTable, SimplicialCategory};
use hofib::homology::{homology_groups, Coefficients};
use hofib::sset::{binary_icosahedral, boundary, polygon, presentation_complex_from_text, product, standard_simplex};
use hofib::subdivision::{barycentric_delta, sd};

fn ours(x: &hofib::SimplicialSet, up_to: usize) -> Vec<String> {
    homology_groups(x, up_to, Coefficients::Integers).iter().map(|g| g.to_string()).collect()
}

#[test]
fn barycentric_counts_match_chain_enumeration() {
    for n in 0..=4 {
        assert_eq!(barycentric_delta(n).counts(), common::chain_counts(n), "n = {n}");
    }
}

#[test]
fn cyclic_classifying_spaces_match_bar_complex() {
    for (n, bound) in [(2usize, 5usize), (3, 5), (4, 4), (5, 3)] {
        let cat = SimplicialCategory::from_monoid(&MonoidTable::cyclic(n)).unwrap();
        let b = classifying_space(&cat, bound).unwrap();
        let want = common::render(&common::bar_homology_cyclic(n, bound - 1));
        assert_eq!(ours(&b.set, bound - 1), want, "Z/{n}");
    }
}

#[test]
fn homology_matches_dense_reference() {
    let d1 = Arc::new(standard_simplex(1));
    let circle = Arc::new(boundary(2).unwrap());
    let spaces = vec![
        boundary(3).unwrap(),
        polygon(4),
        presentation_complex_from_text(&["a"], &["a^3"]).unwrap(),
        presentation_complex_from_text(&["a", "b"], &["abab^-1"]).unwrap(),
        presentation_complex_from_text(&["a", "b"], &["a^2b^-2", "a^4"]).unwrap(),
        binary_icosahedral(),
        (**product(d1, circle.clone(), 3).set()).clone(),
        (**sd(circle).set()).clone(),
    ];
    for x in &spaces {
        let top = x.max_dim();
        assert_eq!(ours(x, top), common::render(&common::reference_homology(x, top)));
    }
}
