use std::collections::HashMap;

use rayon::prelude::*;

use super::category::{Diagram, Morphism, SimplicialCategory};
use super::construction::{borel_total, BorelTotal};
use crate::error::Result;
use crate::fibration::{dp, Fibration, KnownFiberSpec};
use crate::homology::{homology_groups, Coefficients, HomologyGroup, IsoCertificate};
use crate::sset::{SimplexRef, SimplicialMap};

/// One stage of the pipeline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gate {
    pub name: String,
    pub passed: bool,
    pub witnesses: Vec<String>,
}

impl Gate {
    fn new(name: &str, witnesses: Vec<String>) -> Self {
        Gate { name: name.into(), passed: witnesses.is_empty(), witnesses }
    }
}

#[derive(Clone, Debug)]
pub struct GroupCompletionReport {
    pub bound: usize,
    pub valid_up_to: usize,
    pub gates: Vec<Gate>,
    pub total_homology: Vec<HomologyGroup>,
    pub base_homology: Vec<HomologyGroup>,
    /// Object name and `H_*(F(i))`.
    pub fiber_homology: Vec<(String, Vec<HomologyGroup>)>,
    /// Absent when the diagram breaks the functor laws.
    pub total: Option<BorelTotal>,
}

impl GroupCompletionReport {
    pub fn passed(&self) -> bool {
        self.gates.iter().all(|g| g.passed)
    }

    pub fn gate(&self, name: &str) -> Option<&Gate> {
        self.gates.iter().find(|g| g.name == name)
    }
}

fn describe_failure(cert: &IsoCertificate) -> String {
    cert.failure().map(|v| v.describe()).unwrap_or_default()
}

/// Runs the four gates: hypothesis, levelwise, d0 and realization.
/// `extra` fibres are checked on top of `F(i)` over every object `i`.
pub fn group_completion_check(
    cat: &SimplicialCategory,
    f: &Diagram,
    bound: usize,
    extra: &[KnownFiberSpec],
) -> Result<GroupCompletionReport> {
    let up_to = bound.saturating_sub(1);

    // hypothesis: functor laws, then every morphism vertex a homology iso
    let certs: HashMap<Morphism, IsoCertificate> = f.action_certificates(cat, up_to).into_iter().collect();
    let laws = f.law_violations(cat);
    let mut witnesses = laws.clone();
    for m in cat.morphisms() {
        if !certs[&m].is_iso() {
            witnesses.push(format!("{} is not a homology equivalence: {}", cat.describe(m), describe_failure(&certs[&m])));
        }
    }
    let hypothesis = Gate::new("hypothesis", witnesses);
    let z = Coefficients::Integers;
    let fiber_homology =
        (0..cat.object_count()).map(|i| (cat.objects()[i].clone(), homology_groups(f.value(i), up_to, z))).collect();

    if !laws.is_empty() {
        let skipped = |name: &str| Gate::new(name, vec!["not run: the diagram breaks the functor laws".into()]);
        return Ok(GroupCompletionReport {
            bound,
            valid_up_to: up_to,
            gates: vec![hypothesis, skipped("levelwise"), skipped("d0"), skipped("realization")],
            total_homology: Vec::new(),
            base_homology: Vec::new(),
            fiber_homology,
            total: None,
        });
    }
    let total = borel_total(cat, f, bound)?;

    // levelwise: the fibre of E_n -> B_n over every string is a copy of F(i_0)
    let mut jobs = Vec::new();
    for n in 0..=bound {
        for s in 0..total.levels.strings[n].len() {
            jobs.push((n, s));
        }
    }
    let levelwise: Vec<String> = jobs
        .par_iter()
        .filter_map(|&(n, s)| {
            let rec = dp(&total.projections[n], SimplexRef::generator(0, s), bound).ok()?;
            let block = total.levels.block(n, s, f);
            let to_point = SimplicialMap::constant(block.source().clone(), rec.delta.clone(), SimplexRef::generator(0, 0));
            let ok = rec.pullback.lift(&[to_point, block]).map(|m| m.is_isomorphism()).unwrap_or(false);
            (!ok).then(|| format!("level {n}: fibre over {} is not F(i0)", total.levels.strings[n][s].describe(cat)))
        })
        .collect();
    let levelwise = Gate::new("levelwise", levelwise);

    // d0: induced fibre maps; other faces are the identity on fibres
    let mut d0 = Vec::new();
    for n in 1..=bound {
        for (si, s) in total.levels.strings[n].iter().enumerate() {
            for i in 0..=n {
                let (t, act) = s.face(cat, i);
                let ti = total.levels.string_index(n - 1, &t).expect("faces stay in the nerve");
                let block = total.levels.block(n, si, f);
                let face = &total.levels.space.faces[n][i];
                match act {
                    Some(m) => {
                        let expected = f.action(m).then(&total.levels.block(n - 1, ti, f));
                        if !block.then(face).agrees_with(&expected) {
                            d0.push(format!("level {n}: d0 on {} is not F({})", s.describe(cat), cat.name(m)));
                        } else if !certs[&m].is_iso() {
                            d0.push(format!(
                                "level {n}: d0 over {} induces F({}) which is not a homology equivalence",
                                s.describe(cat),
                                cat.name(m)
                            ));
                        }
                    }
                    None => {
                        let expected = total.levels.block(n - 1, ti, f);
                        if !block.then(face).agrees_with(&expected) {
                            d0.push(format!("level {n}: d{i} on {} is not the identity on fibres", s.describe(cat)));
                        }
                    }
                }
            }
        }
    }
    let d0 = Gate::new("d0", d0);

    // realization: weak and strong checks on π_M, fibres as simplicial sets
    let fib = Fibration::new(total.pi.clone(), bound);
    let mut real = Vec::new();
    let weak = fib.weak_check(up_to, false)?;
    real.extend(weak.failures().map(|p| format!("weak: {}", p.witness())));
    let mut specs: Vec<KnownFiberSpec> = (0..cat.object_count())
        .map(|i| KnownFiberSpec {
            vertex: total.base_vertex(i),
            fiber: f.value(i).clone(),
            into_total: Some(total.fiber_inclusion(f, i)),
            provenance: format!("F({})", cat.objects()[i]),
        })
        .collect();
    specs.extend(extra.iter().cloned());
    for spec in &specs {
        let strong = fib.strong_check(spec, up_to)?;
        if !strong.passed() {
            let mut why: Vec<String> = strong.checks.iter().filter(|c| !c.passed()).map(|c| c.witness()).collect();
            why.extend(strong.mismatched.iter().map(|m| format!("homology of dp({m}) differs")));
            if let Some(c) = strong.fiber_map.as_ref().filter(|c| !c.is_iso()) {
                why.push(format!("fibre map: {}", describe_failure(c)));
            }
            real.push(format!("strong against {}: {}", spec.provenance, why.join("; ")));
        }
        if let Some(into) = &spec.into_total {
            let rec = fib.dp(spec.vertex)?;
            let to_point = SimplicialMap::constant(spec.fiber.clone(), rec.delta.clone(), SimplexRef::generator(0, 0));
            let iso = rec.pullback.lift(&[to_point, into.clone()]).map(|m| m.is_isomorphism()).unwrap_or(false);
            if !iso {
                real.push(format!("dp over {} is not isomorphic to {}", fib.base().label(spec.vertex), spec.provenance));
            }
        }
    }
    let realization = Gate::new("realization", real);

    Ok(GroupCompletionReport {
        bound,
        valid_up_to: up_to,
        gates: vec![hypothesis, levelwise, d0, realization],
        total_homology: homology_groups(&total.total.set, up_to, z),
        base_homology: homology_groups(&total.base.set, up_to, z),
        fiber_homology,
        total: Some(total),
    })
}

#[cfg(test)]
mod tests {
    use super::super::category::{restriction_diagram, MonoidTable};
    use super::*;
    use crate::sset::SimplicialMap;

    #[test]
    fn z2_passes_every_gate() {
        let c = SimplicialCategory::from_monoid(&MonoidTable::cyclic(2)).unwrap();
        let r = group_completion_check(&c, &restriction_diagram(&c, 0), 3, &[]).unwrap();
        for g in &r.gates {
            assert!(g.passed, "{}: {:?}", g.name, g.witnesses);
        }
        assert!(r.total_homology.iter().skip(1).all(|h| h.is_zero()));
    }

    #[test]
    fn corrupted_idempotent_names_the_morphism() {
        let c = SimplicialCategory::from_monoid(&MonoidTable::idempotent()).unwrap();
        let d = restriction_diagram(&c, 0);
        let e = c.morphism(0, 0, "e").unwrap();
        let v = d.value(0).clone();
        let bad = d.with_action(e, SimplicialMap::constant(v.clone(), v, SimplexRef::generator(0, 0)));
        let r = group_completion_check(&c, &bad, 2, &[]).unwrap();
        let gate = r.gate("hypothesis").unwrap();
        assert!(!gate.passed);
        assert_eq!(gate.witnesses.len(), 1);
        assert!(gate.witnesses[0].starts_with("e: * -> *"));
        assert!(r.total.is_some());
    }

    #[test]
    fn lawless_action_skips_later_gates() {
        let c = SimplicialCategory::from_monoid(&MonoidTable::cyclic(2)).unwrap();
        let d = restriction_diagram(&c, 0);
        let t = c.morphism(0, 0, "t").unwrap();
        let v = d.value(0).clone();
        let bad = d.with_action(t, SimplicialMap::constant(v.clone(), v, SimplexRef::generator(0, 0)));
        let r = group_completion_check(&c, &bad, 2, &[]).unwrap();
        let gate = r.gate("hypothesis").unwrap();
        assert!(!gate.passed);
        assert!(gate.witnesses.iter().any(|w| w.contains("t: * -> *")));
    }
}
