use std::sync::Arc;

use crate::error::{Error, Result};
use crate::homology::{is_homology_iso, IsoCertificate};
use crate::sset::{Label, SimplexRef, SimplicialMap, SimplicialSet};

/// A finite monoid given by its multiplication table; `mul[a][b] = a·b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidTable {
    pub elements: Vec<String>,
    pub unit: usize,
    pub mul: Vec<Vec<usize>>,
}

impl MonoidTable {
    /// `ℤ/n` with elements `1, t, t^2, …`.
    pub fn cyclic(n: usize) -> Self {
        let name = |k: usize| match k {
            0 => "1".to_string(),
            1 => "t".to_string(),
            _ => format!("t^{k}"),
        };
        MonoidTable {
            elements: (0..n).map(name).collect(),
            unit: 0,
            mul: (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect(),
        }
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// `{1, e}` with `e·e = e`.
    pub fn idempotent() -> Self {
        MonoidTable { elements: vec!["1".into(), "e".into()], unit: 0, mul: vec![vec![0, 1], vec![1, 1]] }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.elements.len();
        if n == 0 {
            return Err(Error::InvalidMonoid("no elements".into()));
        }
        if self.unit >= n {
            return Err(Error::InvalidMonoid("unit is not an element".into()));
        }
        if self.mul.len() != n || self.mul.iter().any(|r| r.len() != n || r.iter().any(|&c| c >= n)) {
            return Err(Error::InvalidMonoid("table is not square over the elements".into()));
        }
        let e = &self.elements;
        for a in 0..n {
            if self.mul[self.unit][a] != a || self.mul[a][self.unit] != a {
                return Err(Error::InvalidMonoid(format!("{} is not a unit for {}", e[self.unit], e[a])));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let left = self.mul[self.mul[a][b]][c];
                    let right = self.mul[a][self.mul[b][c]];
                    if left != right {
                        return Err(Error::InvalidMonoid(format!(
                            "({0}.{1}).{2} = {3} but {0}.({1}.{2}) = {4}",
                            e[a], e[b], e[c], e[left], e[right]
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A finite category with discrete morphism spaces.
#[derive(Clone, Debug)]
pub struct SimplicialCategory {
    objects: Vec<String>,
    homs: Vec<Vec<Arc<SimplicialSet>>>,
    names: Vec<Vec<Vec<String>>>,
    identities: Vec<usize>,
    /// `compose[i][j][k][g][f] = g ∘ f` for `f: i -> j`, `g: j -> k`.
    compose: Vec<Vec<Vec<Vec<Vec<usize>>>>>,
}

/// A morphism vertex `f: source -> target`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Morphism {
    pub source: usize,
    pub target: usize,
    pub index: usize,
}

impl SimplicialCategory {
    pub fn new(
        objects: Vec<String>,
        names: Vec<Vec<Vec<String>>>,
        identities: Vec<usize>,
        compose: Vec<Vec<Vec<Vec<Vec<usize>>>>>,
    ) -> Result<Self> {
        let n = objects.len();
        let bad = |m: String| Err(Error::InvalidCategory(m));
        if n == 0 {
            return bad("no objects".into());
        }
        if names.len() != n || names.iter().any(|r| r.len() != n) || identities.len() != n {
            return bad("hom table does not match the object set".into());
        }
        if compose.len() != n {
            return bad("composition table does not match the object set".into());
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let table = compose[i].get(j).and_then(|r| r.get(k));
                    let ok = table.is_some_and(|t| {
                        t.len() == names[j][k].len()
                            && t.iter().all(|row| row.len() == names[i][j].len() && row.iter().all(|&c| c < names[i][k].len()))
                    });
                    if !ok {
                        return bad(format!("composition {} -> {} -> {} is malformed", objects[i], objects[j], objects[k]));
                    }
                }
            }
        }
        let homs = names
            .iter()
            .map(|row| row.iter().map(|ns| Arc::new(SimplicialSet::discrete(ns.iter().map(|s| Label::name(s.clone()))))).collect())
            .collect();
        let cat = SimplicialCategory { objects, homs, names, identities, compose };
        cat.validate()?;
        Ok(cat)
    }

    pub fn from_monoid(table: &MonoidTable) -> Result<Self> {
        table.validate()?;
        Self::new(
            vec!["*".into()],
            vec![vec![table.elements.clone()]],
            vec![table.unit],
            vec![vec![vec![table.mul.clone()]]],
        )
    }

    /// Unit and associativity laws on every composable triple.
    pub fn validate(&self) -> Result<()> {
        let n = self.objects.len();
        for i in 0..n {
            let id = self.identities[i];
            if id >= self.hom_size(i, i) {
                return Err(Error::InvalidCategory(format!("identity of {} missing", self.objects[i])));
            }
            for j in 0..n {
                for f in 0..self.hom_size(i, j) {
                    let ff = Morphism { source: i, target: j, index: f };
                    let id_j = Morphism { source: j, target: j, index: self.identities[j] };
                    let id_i = Morphism { source: i, target: i, index: id };
                    if self.compose(id_j, ff) != ff || self.compose(ff, id_i) != ff {
                        return Err(Error::InvalidCategory(format!("identity law fails at {}", self.name(ff))));
                    }
                }
            }
        }
        for (a, b, c, d) in self.quads() {
            for f in 0..self.hom_size(a, b) {
                for g in 0..self.hom_size(b, c) {
                    for h in 0..self.hom_size(c, d) {
                        let (f, g, h) = (
                            Morphism { source: a, target: b, index: f },
                            Morphism { source: b, target: c, index: g },
                            Morphism { source: c, target: d, index: h },
                        );
                        if self.compose(h, self.compose(g, f)) != self.compose(self.compose(h, g), f) {
                            return Err(Error::InvalidCategory(format!(
                                "associativity fails at {} {} {}",
                                self.name(h),
                                self.name(g),
                                self.name(f)
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn quads(&self) -> impl Iterator<Item = (usize, usize, usize, usize)> {
        let n = self.objects.len();
        (0..n.pow(4)).map(move |x| (x % n, x / n % n, x / n / n % n, x / n / n / n))
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    /// `hom(i, j)` as a discrete simplicial set.
    pub fn hom(&self, i: usize, j: usize) -> &Arc<SimplicialSet> {
        &self.homs[i][j]
    }

    pub fn hom_size(&self, i: usize, j: usize) -> usize {
        self.names[i][j].len()
    }

    pub fn identity(&self, i: usize) -> Morphism {
        Morphism { source: i, target: i, index: self.identities[i] }
    }

    /// `g ∘ f`.
    pub fn compose(&self, g: Morphism, f: Morphism) -> Morphism {
        assert_eq!(f.target, g.source, "morphisms are not composable");
        let index = self.compose[f.source][f.target][g.target][g.index][f.index];
        Morphism { source: f.source, target: g.target, index }
    }

    pub fn morphism(&self, i: usize, j: usize, name: &str) -> Option<Morphism> {
        self.names[i][j].iter().position(|n| n == name).map(|index| Morphism { source: i, target: j, index })
    }

    pub fn name(&self, f: Morphism) -> &str {
        &self.names[f.source][f.target][f.index]
    }

    /// Every morphism vertex.
    pub fn morphisms(&self) -> Vec<Morphism> {
        let n = self.objects.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                out.extend((0..self.hom_size(i, j)).map(|index| Morphism { source: i, target: j, index }));
            }
        }
        out
    }

    /// `f` as a labelled string such as `e: * -> *`.
    pub fn describe(&self, f: Morphism) -> String {
        format!("{}: {} -> {}", self.name(f), self.objects[f.source], self.objects[f.target])
    }
}

/// A contravariant diagram: spaces `F(i)` and maps `F(f): F(j) -> F(i)` for
/// every morphism vertex `f: i -> j`.
#[derive(Clone, Debug)]
pub struct Diagram {
    values: Vec<Arc<SimplicialSet>>,
    /// `actions[i][j][f]`.
    actions: Vec<Vec<Vec<SimplicialMap>>>,
}

impl Diagram {
    /// Checks shapes and that every action is a simplicial map with the right
    /// ends; the functor laws are reported by [`Diagram::law_violations`].
    pub fn new(cat: &SimplicialCategory, values: Vec<Arc<SimplicialSet>>, actions: Vec<Vec<Vec<SimplicialMap>>>) -> Result<Self> {
        let n = cat.object_count();
        let bad = |m: String| Err(Error::InvalidDiagram(m));
        if values.len() != n || actions.len() != n || actions.iter().any(|r| r.len() != n) {
            return bad("diagram does not match the object set".into());
        }
        for f in cat.morphisms() {
            let Some(m) = actions[f.source][f.target].get(f.index) else {
                return bad(format!("no action for {}", cat.describe(f)));
            };
            if **m.source() != *values[f.target] || **m.target() != *values[f.source] {
                return bad(format!("action of {} has the wrong ends", cat.describe(f)));
            }
            if let Some(v) = m.violations().into_iter().next() {
                return bad(format!("action of {} is not simplicial: {v}", cat.describe(f)));
            }
        }
        if actions.iter().enumerate().any(|(i, r)| r.iter().enumerate().any(|(j, a)| a.len() != cat.hom_size(i, j))) {
            return bad("too many actions".into());
        }
        Ok(Diagram { values, actions })
    }

    /// Builds and insists on the functor laws.
    pub fn checked(cat: &SimplicialCategory, values: Vec<Arc<SimplicialSet>>, actions: Vec<Vec<Vec<SimplicialMap>>>) -> Result<Self> {
        let d = Self::new(cat, values, actions)?;
        match d.law_violations(cat).into_iter().next() {
            Some(v) => Err(Error::InvalidDiagram(v)),
            None => Ok(d),
        }
    }

    pub fn value(&self, i: usize) -> &Arc<SimplicialSet> {
        &self.values[i]
    }

    pub fn action(&self, f: Morphism) -> &SimplicialMap {
        &self.actions[f.source][f.target][f.index]
    }

    /// Replaces one action, keeping the rest.
    pub fn with_action(mut self, f: Morphism, map: SimplicialMap) -> Self {
        self.actions[f.source][f.target][f.index] = map;
        self
    }

    /// Identity and composition laws, named by the offending morphisms.
    pub fn law_violations(&self, cat: &SimplicialCategory) -> Vec<String> {
        let mut out = Vec::new();
        for i in 0..cat.object_count() {
            let id = cat.identity(i);
            if !self.action(id).agrees_with(&SimplicialMap::identity(self.values[i].clone())) {
                out.push(format!("{} does not act as the identity", cat.describe(id)));
            }
        }
        let ms = cat.morphisms();
        for &f in &ms {
            for &g in ms.iter().filter(|g| g.source == f.target) {
                // F(g ∘ f) = F(f) ∘ F(g)
                let lhs = self.action(cat.compose(g, f));
                let rhs = self.action(g).then(self.action(f));
                if !lhs.agrees_with(&rhs) {
                    out.push(format!("F({} . {}) differs from F({}) . F({})", cat.name(g), cat.name(f), cat.name(f), cat.name(g)));
                }
            }
        }
        out
    }

    /// Homology certificate for every morphism vertex, in `morphisms()` order.
    pub fn action_certificates(&self, cat: &SimplicialCategory, up_to: usize) -> Vec<(Morphism, IsoCertificate)> {
        use rayon::prelude::*;
        cat.morphisms().into_par_iter().map(|f| (f, is_homology_iso(self.action(f), up_to))).collect()
    }
}

/// `T(i) = {i}`.
pub fn trivial_diagram(cat: &SimplicialCategory) -> Diagram {
    let n = cat.object_count();
    let values: Vec<Arc<SimplicialSet>> =
        cat.objects().iter().map(|o| Arc::new(SimplicialSet::discrete([Label::name(o.clone())]))).collect();
    let actions = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..cat.hom_size(i, j))
                        .map(|_| SimplicialMap::constant(values[j].clone(), values[i].clone(), SimplexRef::generator(0, 0)))
                        .collect()
                })
                .collect()
        })
        .collect();
    Diagram { values, actions }
}

/// `M_j(i) = hom(i, j)`, acted on by precomposition.
pub fn restriction_diagram(cat: &SimplicialCategory, j: usize) -> Diagram {
    let n = cat.object_count();
    let values: Vec<Arc<SimplicialSet>> = (0..n).map(|i| cat.hom(i, j).clone()).collect();
    let actions = (0..n)
        .map(|i| {
            (0..n)
                .map(|k| {
                    (0..cat.hom_size(i, k))
                        .map(|f| {
                            let f = Morphism { source: i, target: k, index: f };
                            SimplicialMap::from_fn(values[k].clone(), values[i].clone(), |g| {
                                let g = Morphism { source: k, target: j, index: g.gen() };
                                SimplexRef::generator(0, cat.compose(g, f).index)
                            })
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    Diagram { values, actions }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_monoids_validate() {
        for t in [MonoidTable::trivial(), MonoidTable::cyclic(2), MonoidTable::cyclic(3), MonoidTable::idempotent()] {
            let c = SimplicialCategory::from_monoid(&t).unwrap();
            assert_eq!(c.hom(0, 0).counts(), vec![t.elements.len()]);
        }
    }

    #[test]
    fn nonassociative_table_is_rejected() {
        // a.a = b, a.b = 1, b.a = b, b.b = a: unit ok, associativity fails
        let t = MonoidTable {
            elements: vec!["1".into(), "a".into(), "b".into()],
            unit: 0,
            mul: vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 2, 1]],
        };
        assert!(matches!(SimplicialCategory::from_monoid(&t), Err(Error::InvalidMonoid(_))));
    }

    #[test]
    fn restriction_is_lawful() {
        for t in [MonoidTable::cyclic(3), MonoidTable::idempotent()] {
            let c = SimplicialCategory::from_monoid(&t).unwrap();
            assert!(restriction_diagram(&c, 0).law_violations(&c).is_empty());
            assert!(trivial_diagram(&c).law_violations(&c).is_empty());
        }
    }

    #[test]
    fn idempotent_restriction_is_not_homology_invertible() {
        let c = SimplicialCategory::from_monoid(&MonoidTable::idempotent()).unwrap();
        let d = restriction_diagram(&c, 0);
        let bad: Vec<_> = d.action_certificates(&c, 1).into_iter().filter(|(_, cert)| !cert.is_iso()).collect();
        assert_eq!(bad.len(), 1);
        assert_eq!(c.name(bad[0].0), "e");
    }
}
