//! The eleven acceptance criteria. Each prints one pass/fail line; the test
//! fails if any criterion does. Run with `--nocapture` to see the lines.

mod common;

use std::sync::Arc;
use std::time::{Duration, Instant};

use hofib::borel::{
    classifying_space, group_completion_check, restriction_diagram, telescope_diagram, thick_realize, MonoidTable,
    SimplicialCategory, SimplicialSpace,
};
use hofib::fibration::{fiber_homology_over_contractible, pullback_fibration, weak_fibration_check};
use hofib::homology::{homology_groups, is_acyclic, is_homology_iso, Coefficients, HomologyGroup};
use hofib::sset::{
    binary_icosahedral, boundary, polygon, polygon_covering, presentation_complex_from_text, product, standard_simplex,
    suspension,
};
use hofib::subdivision::{barycentric_delta, sd, sd_over_simplex, SubdividedMap};
use hofib::{SimplicialMap, SimplicialSet};

const Z: Coefficients = Coefficients::Integers;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn names(gs: &[HomologyGroup]) -> Vec<String> {
    gs.iter().map(|g| g.to_string()).collect()
}

fn arc(x: SimplicialSet) -> Arc<SimplicialSet> {
    Arc::new(x)
}

/// Spaces of dimension at most 3.
fn space_corpus() -> Vec<(&'static str, Arc<SimplicialSet>)> {
    let d1 = arc(standard_simplex(1));
    let circle = arc(boundary(2).unwrap());
    vec![
        ("point", arc(standard_simplex(0))),
        ("delta2", arc(standard_simplex(2))),
        ("delta3", arc(standard_simplex(3))),
        ("boundary2", circle.clone()),
        ("boundary3", arc(boundary(3).unwrap())),
        ("boundary4", arc(boundary(4).unwrap())),
        ("loop", arc(polygon(1))),
        ("pentagon", arc(polygon(5))),
        ("projective plane", arc(presentation_complex_from_text(&["a"], &["a^2"]).unwrap())),
        ("torus", arc(presentation_complex_from_text(&["a", "b"], &["aba^-1b^-1"]).unwrap())),
        ("klein bottle", arc(presentation_complex_from_text(&["a", "b"], &["abab^-1"]).unwrap())),
        ("square", product(d1.clone(), d1.clone(), 3).set().clone()),
        ("cylinder", product(d1, circle.clone(), 3).set().clone()),
        ("suspended circle", suspension(&circle).unwrap().0),
    ]
}

/// Maps over standard simplices of dimension at most 2.
fn maps_over_simplices() -> Vec<(&'static str, SimplicialMap)> {
    let d1 = arc(standard_simplex(1));
    let d2 = arc(standard_simplex(2));
    let circle = arc(boundary(2).unwrap());
    vec![
        ("id delta1", SimplicialMap::identity(d1.clone())),
        ("id delta2", SimplicialMap::identity(d2.clone())),
        ("collapse delta2 -> delta1", common::vertex_map(d2.clone(), d1.clone(), &[0, 0, 1])),
        ("projection square -> delta1", product(d1.clone(), d1.clone(), 3).projection(0)),
        ("projection delta1 x circle", product(d1.clone(), circle.clone(), 3).projection(0)),
        ("projection delta2 x circle", product(d2.clone(), circle.clone(), 3).projection(0)),
        ("suspended circle -> delta1", suspension(&circle).unwrap().1),
        ("collapse circle -> delta1", common::vertex_map(circle, d1, &[0, 0, 1])),
        ("suspended acyclic -> delta1", suspension(&arc(binary_icosahedral())).unwrap().1),
    ]
}

fn c1_boundary_homology() -> Outcome {
    let mut bad = Vec::new();
    for n in 1..=4 {
        let x = boundary(n + 1).unwrap();
        let got = names(&homology_groups(&x, n, Z));
        let mut want = vec!["0".to_string(); n + 1];
        want[0] = "Z".into();
        want[n] = "Z".into();
        if got != want {
            bad.push(format!("n={n}: {got:?}"));
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { "spheres n=1..4 exact".into() } else { bad.join(", ") })
}

fn c2_group_homology() -> Outcome {
    let cat = SimplicialCategory::from_monoid(&MonoidTable::cyclic(2)).unwrap();
    let b = classifying_space(&cat, 6).unwrap();
    let got = names(&homology_groups(&b.set, 5, Z));
    let oracle = common::render(&common::bar_homology_cyclic(2, 5));
    let want: Vec<String> = ["Z", "Z/2", "0", "Z/2", "0", "Z/2"].iter().map(|s| s.to_string()).collect();
    outcome(got == want && oracle == want, format!("B(Z/2) at N=6: {got:?}, bar oracle {oracle:?}"))
}

fn c3_subdivision_invariance() -> Outcome {
    let mut bad = Vec::new();
    let corpus = space_corpus();
    for (name, x) in &corpus {
        let s = sd(x.clone());
        if !s.set().validate().is_empty() || !is_homology_iso(&s.last_vertex(), 3).is_iso() {
            bad.push(name.to_string());
        }
    }
    let counts = barycentric_delta(2).counts();
    if counts != vec![7, 12, 6] {
        bad.push(format!("barycentric delta2 counts {counts:?}"));
    }
    outcome(bad.is_empty(), format!("{} spaces, failures {bad:?}", corpus.len()))
}

fn c4_star_lemma() -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    for (name, f) in maps_over_simplices() {
        let sf = sd_over_simplex(&f).unwrap();
        for alpha in 1..(1u32 << (sf.n + 1)) {
            if sf.est(alpha).set.is_empty() {
                continue;
            }
            let lemma = sf.star_retraction(alpha).unwrap();
            checked += 1;
            let check = lemma.check();
            if !check.passed() || !is_homology_iso(&lemma.inclusion, 3).is_iso() {
                bad.push(format!("{name} alpha={alpha:b}: {check:?}"));
            }
        }
    }
    outcome(bad.is_empty(), format!("{checked} (map, face) pairs, failures {bad:?}"))
}

fn c5_cube_decomposition() -> Outcome {
    let d3 = arc(standard_simplex(3));
    let d1 = arc(standard_simplex(1));
    let mut maps = maps_over_simplices();
    maps.push(("id delta3", SimplicialMap::identity(d3.clone())));
    maps.push(("projection delta3 x delta1", product(d3.clone(), d1, 4).projection(0)));
    maps.push(("collapse delta3 -> delta2", common::vertex_map(d3, arc(standard_simplex(2)), &[0, 1, 1, 2])));
    let mut bad = Vec::new();
    for (name, f) in &maps {
        let sf = sd_over_simplex(f).unwrap();
        match sf.cube_decomposition() {
            Ok(c) if c.colimit.counts() == sf.source().counts() && c.comparison.is_isomorphism() => {}
            Ok(_) => bad.push(name.to_string()),
            Err(e) => bad.push(format!("{name}: {e}")),
        }
    }
    outcome(bad.is_empty(), format!("{} maps, failures {bad:?}", maps.len()))
}

fn barycenter_matches_total(sf: &SubdividedMap, up_to: usize) -> bool {
    let pre = sf.barycenter_preimage();
    let to_total = pre.inclusion.then(&sf.sd.last_vertex());
    is_homology_iso(&to_total, up_to).is_iso()
}

fn c6_barycenter() -> Outcome {
    let mut bad = Vec::new();
    let mut used = Vec::new();
    for (name, f) in maps_over_simplices() {
        if !weak_fibration_check(&f, 3).unwrap().passed() {
            continue;
        }
        used.push(name);
        if !barycenter_matches_total(&sd_over_simplex(&f).unwrap(), 3) {
            bad.push(name);
        }
    }
    let has_product = used.iter().any(|n| n.starts_with("projection"));
    let has_other = used.iter().any(|n| n.starts_with("suspended acyclic") || n.starts_with("collapse"));
    outcome(bad.is_empty() && has_product && has_other, format!("maps passing the weak check {used:?}, failures {bad:?}"))
}

fn c7_discrimination() -> Outcome {
    let d1 = arc(standard_simplex(1));
    let circle = arc(boundary(2).unwrap());
    let proj_a = product(d1.clone(), circle.clone(), 3).projection(0);
    let proj_b = product(d1.clone(), circle.clone(), 3).projection(1);
    let cover = polygon_covering(arc(polygon(6)), arc(polygon(3)));
    let collapse = common::vertex_map(circle, d1, &[0, 0, 1]);
    let pa = weak_fibration_check(&proj_a, 2).unwrap().passed();
    let pb = weak_fibration_check(&proj_b, 2).unwrap().passed();
    let pc = weak_fibration_check(&cover, 2).unwrap().passed();
    let col = weak_fibration_check(&collapse, 1).unwrap();
    let witness: Vec<(String, usize)> =
        col.failures().map(|f| (f.operation.clone(), f.certificate.failure().map(|v| v.degree).unwrap_or(99))).collect();
    let collapse_ok = !col.passed() && !witness.is_empty() && witness.iter().all(|(_, d)| *d == 1);
    outcome(pa && pb && pc && collapse_ok, format!("projections {pa}/{pb}, covering {pc}, collapse witnesses {witness:?}"))
}

fn c8_pullback_stability() -> Outcome {
    let c3 = arc(polygon(3));
    let p = polygon_covering(arc(polygon(6)), c3.clone());
    let f = polygon_covering(arc(polygon(12)), c3);
    let before = weak_fibration_check(&p, 2).unwrap().passed();
    let pulled = pullback_fibration(&p, &f, 3, before).unwrap();
    let after = weak_fibration_check(&pulled.map, 2).unwrap().passed();
    outcome(before && after, format!("verdict before {before}, after {after}, pulled back total {:?}", pulled.total.set().counts()))
}

fn c9_group_completion() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for (name, n) in [("Z/2", 2usize), ("Z/3", 3)] {
        let cat = SimplicialCategory::from_monoid(&MonoidTable::cyclic(n)).unwrap();
        let r = group_completion_check(&cat, &restriction_diagram(&cat, 0), 4, &[]).unwrap();
        let acyclic = r.total_homology.iter().skip(1).all(|h| h.is_zero()) && r.total_homology[0].free_rank == 1;
        let base = names(&r.base_homology);
        let oracle = common::render(&common::bar_homology_cyclic(n, 3));
        let gates: Vec<String> = r.gates.iter().filter(|g| !g.passed).map(|g| format!("{} {:?}", g.name, g.witnesses)).collect();
        ok &= r.passed() && acyclic && base == oracle;
        lines.push(format!("{name}: gates failing {gates:?}, total acyclic {acyclic}, BG {base:?}"));
    }
    let idem = SimplicialCategory::from_monoid(&MonoidTable::idempotent()).unwrap();
    let e = idem.morphism(0, 0, "e").unwrap();
    let tel = telescope_diagram(&idem, 0, e, 2).unwrap();
    let r = group_completion_check(&idem, &tel, 4, &[]).unwrap();
    let acyclic = r.total_homology.iter().skip(1).all(|h| h.is_zero());
    let gates: Vec<String> = r.gates.iter().filter(|g| !g.passed).map(|g| g.name.clone()).collect();
    ok &= r.passed() && acyclic;
    lines.push(format!("{{1,e}} telescope: gates failing {gates:?}, total acyclic {acyclic}"));
    outcome(ok, lines.join("; "))
}

fn c10_waldhausen() -> Outcome {
    let a = arc(binary_icosahedral());
    let a_acyclic = is_acyclic(&a, 2);
    let (sigma_a, p) = suspension(&a).unwrap();
    let report = fiber_homology_over_contractible(&p, 2).unwrap();
    let point_like = names(&report.table) == vec!["Z", "0", "0"];
    let sf = sd_over_simplex(&p).unwrap();
    let pre = sf.barycenter_preimage();
    let pre_acyclic = is_acyclic(&pre.set, 2);
    let cells = pre.set.total_generators();
    let ok = a_acyclic && report.passed() && point_like && pre_acyclic && cells > 1;
    outcome(
        ok,
        format!(
            "A acyclic {a_acyclic}, suspension {:?} over-contractible {} table {:?}, barycenter preimage acyclic {pre_acyclic} with {cells} generators",
            sigma_a.counts(),
            report.passed(),
            names(&report.table)
        ),
    )
}

fn c11_fat_point() -> Outcome {
    let point = arc(SimplicialSet::point());
    let r1 = thick_realize(&SimplicialSpace::constant(point.clone(), 1), 1).unwrap();
    let h1 = homology_groups(&r1.stages[1], 1, Z);
    let mut ok = names(&h1) == vec!["Z", "Z"];
    let mut detail = vec![format!("stage 1 {:?}", names(&h1))];
    for n in 2..=4 {
        let r = thick_realize(&SimplicialSpace::constant(point.clone(), n), n).unwrap();
        let h = homology_groups(&r.set, n - 1, Z);
        let good = h[0].free_rank == 1 && h[0].torsion.is_empty() && h.iter().skip(1).all(|g| g.is_zero());
        ok &= good;
        detail.push(format!("N={n} {:?}", names(&h)));
    }
    outcome(ok, detail.join(", "))
}

#[test]
fn acceptance() {
    type Criterion = (&'static str, fn() -> Outcome, Duration);
    let criteria: [Criterion; 11] = [
        ("boundary spheres", c1_boundary_homology, Duration::from_secs(5)),
        ("group homology of Z/2", c2_group_homology, Duration::from_secs(60)),
        ("subdivision invariance", c3_subdivision_invariance, Duration::from_secs(60)),
        ("star lemma", c4_star_lemma, Duration::from_secs(120)),
        ("cube decomposition", c5_cube_decomposition, Duration::from_secs(600)),
        ("barycenter preimages", c6_barycenter, Duration::from_secs(300)),
        ("weak fibration discrimination", c7_discrimination, Duration::from_secs(600)),
        ("pullback stability", c8_pullback_stability, Duration::from_secs(600)),
        ("group completion", c9_group_completion, Duration::from_secs(600)),
        ("acyclic suspension", c10_waldhausen, Duration::from_secs(300)),
        ("fat point filtration", c11_fat_point, Duration::from_secs(600)),
    ];
    let mut failed = Vec::new();
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let pass = out.passed && took <= *limit;
        println!(
            "criterion {:>2} {:<30} {} ({:.2}s, limit {}s): {}",
            i + 1,
            name,
            if pass { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            limit.as_secs(),
            out.detail
        );
        if !pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
