use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use super::category::{Diagram, Morphism, SimplicialCategory};
use super::space::{realize_map, thick_realize, Realization, SimplicialSpace};
use crate::error::{Error, Result};
use crate::sset::{
    boundary, delta_simplex, delta_vertices, disjoint_union, product, pushout, standard_simplex, Generator, Label,
    SimplexRef, SimplicialMap, SimplicialSet,
};

/// A string `i_n -f_n-> … -f_1-> i_0` of composable morphism vertices;
/// `morphisms[k - 1]` is `f_k: i_k -> i_{k-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MorphString {
    pub objects: Vec<usize>,
    pub morphisms: Vec<usize>,
}

impl MorphString {
    pub fn len(&self) -> usize {
        self.morphisms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.morphisms.is_empty()
    }

    fn morphism(&self, k: usize) -> Morphism {
        Morphism { source: self.objects[k], target: self.objects[k - 1], index: self.morphisms[k - 1] }
    }

    /// `d_i`, with the morphism whose action `d_0` applies.
    pub fn face(&self, cat: &SimplicialCategory, i: usize) -> (MorphString, Option<Morphism>) {
        let n = self.len();
        let mut objects = self.objects.clone();
        let mut morphisms = self.morphisms.clone();
        if i == 0 {
            objects.remove(0);
            morphisms.remove(0);
            return (MorphString { objects, morphisms }, Some(self.morphism(1)));
        }
        if i == n {
            objects.pop();
            morphisms.pop();
        } else {
            let g = cat.compose(self.morphism(i), self.morphism(i + 1));
            objects.remove(i);
            morphisms.remove(i);
            morphisms[i - 1] = g.index;
        }
        (MorphString { objects, morphisms }, None)
    }

    /// `s_k`: an identity inserted at `i_k`.
    pub fn degeneracy(&self, cat: &SimplicialCategory, k: usize) -> MorphString {
        let mut objects = self.objects.clone();
        let mut morphisms = self.morphisms.clone();
        objects.insert(k, self.objects[k]);
        morphisms.insert(k, cat.identity(self.objects[k]).index);
        MorphString { objects, morphisms }
    }

    pub fn describe(&self, cat: &SimplicialCategory) -> String {
        let names: Vec<&str> = (1..=self.len()).map(|k| cat.name(self.morphism(k))).collect();
        if cat.object_count() == 1 {
            format!("[{}]", names.join("|"))
        } else {
            format!("[{}]@{}", names.join("|"), cat.objects()[self.objects[0]])
        }
    }
}

/// Composable strings of length `n`, in sorted order.
pub fn strings(cat: &SimplicialCategory, n: usize) -> Vec<MorphString> {
    let mut level: Vec<MorphString> =
        (0..cat.object_count()).map(|i| MorphString { objects: vec![i], morphisms: vec![] }).collect();
    for _ in 0..n {
        let mut next = Vec::new();
        for s in &level {
            let last = *s.objects.last().unwrap();
            for i in 0..cat.object_count() {
                for f in 0..cat.hom_size(i, last) {
                    let mut t = s.clone();
                    t.objects.push(i);
                    t.morphisms.push(f);
                    next.push(t);
                }
            }
        }
        level = next;
    }
    level.sort();
    level
}

/// `E_M F_•`: level `n` is a copy of `F(i_0)` for every string of length `n`.
#[derive(Clone, Debug)]
pub struct BorelSpace {
    pub space: SimplicialSpace,
    pub strings: Vec<Vec<MorphString>>,
    index: Vec<HashMap<MorphString, usize>>,
    /// `offsets[n][s][d]`: first generator of string `s` in degree `d`.
    offsets: Vec<Vec<Vec<usize>>>,
    owner: Vec<Vec<Vec<usize>>>,
}

impl BorelSpace {
    pub fn new(cat: &SimplicialCategory, f: &Diagram, top: usize) -> Result<Self> {
        let strings: Vec<Vec<MorphString>> = (0..=top).map(|n| self::strings(cat, n)).collect();
        let index: Vec<HashMap<MorphString, usize>> =
            strings.iter().map(|l| l.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect()).collect();
        let mut levels = Vec::with_capacity(top + 1);
        let mut offsets = Vec::with_capacity(top + 1);
        let mut owner = Vec::with_capacity(top + 1);
        for level in &strings {
            let dim = level.iter().map(|s| f.value(s.objects[0]).max_dim()).max().unwrap_or(0);
            let mut gens: Vec<Vec<Generator>> = vec![Vec::new(); dim + 1];
            let mut offs = Vec::with_capacity(level.len());
            let mut own: Vec<Vec<usize>> = vec![Vec::new(); dim + 1];
            for (si, s) in level.iter().enumerate() {
                let x = f.value(s.objects[0]);
                let off: Vec<usize> = (0..=dim).map(|d| gens[d].len()).collect();
                let tag = Label::name(s.describe(cat));
                for d in 0..=x.max_dim() {
                    for g in x.level(d) {
                        let faces = g
                            .faces
                            .iter()
                            .map(|fc| SimplexRef::generator(fc.gen_dim(), fc.gen() + off[fc.gen_dim()]).degenerate(fc.degeneracy))
                            .collect();
                        gens[d].push(Generator { label: Label::Tuple(vec![tag.clone(), g.label.clone()]), faces });
                        own[d].push(si);
                    }
                }
                offs.push(off);
            }
            let trunc = level.iter().filter_map(|s| f.value(s.objects[0]).truncation()).min();
            levels.push(Arc::new(SimplicialSet::from_levels_unchecked(gens, trunc)));
            offsets.push(offs);
            owner.push(own);
        }
        let mut b = BorelSpace {
            space: SimplicialSpace { levels, faces: Vec::new(), degeneracies: Vec::new() },
            strings,
            index,
            offsets,
            owner,
        };
        let faces: Vec<Vec<SimplicialMap>> = (0..=top)
            .map(|n| {
                if n == 0 {
                    return Vec::new();
                }
                (0..=n)
                    .into_par_iter()
                    .map(|i| {
                        SimplicialMap::from_fn(b.space.levels[n].clone(), b.space.levels[n - 1].clone(), |g| {
                            let (s, y) = b.locate(n, g);
                            let (t, act) = b.strings[n][s].face(cat, i);
                            let y = match act {
                                Some(m) => f.action(m).apply(y),
                                None => y,
                            };
                            b.place(n - 1, b.index[n - 1][&t], y)
                        })
                    })
                    .collect()
            })
            .collect();
        let degeneracies: Vec<Vec<SimplicialMap>> = (0..top)
            .map(|n| {
                (0..=n)
                    .map(|k| {
                        SimplicialMap::from_fn(b.space.levels[n].clone(), b.space.levels[n + 1].clone(), |g| {
                            let (s, y) = b.locate(n, g);
                            let t = b.strings[n][s].degeneracy(cat, k);
                            b.place(n + 1, b.index[n + 1][&t], y)
                        })
                    })
                    .collect()
            })
            .collect();
        b.space.faces = faces;
        b.space.degeneracies = degeneracies;
        if let Some(v) = b.space.identity_violations().into_iter().next() {
            return Err(Error::InvalidDiagram(format!("Borel levels break a simplicial identity: {v}")));
        }
        Ok(b)
    }

    pub fn top(&self) -> usize {
        self.space.top()
    }

    pub fn level(&self, n: usize) -> &Arc<SimplicialSet> {
        &self.space.levels[n]
    }

    pub fn string_index(&self, n: usize, s: &MorphString) -> Option<usize> {
        self.index[n].get(s).copied()
    }

    /// The string a simplex of level `n` lies over, with its preimage in `F(i_0)`.
    pub fn locate(&self, n: usize, x: SimplexRef) -> (usize, SimplexRef) {
        let d = x.gen_dim();
        let s = self.owner[n][d][x.gen()];
        (s, SimplexRef::generator(d, x.gen() - self.offsets[n][s][d]).degenerate(x.degeneracy))
    }

    /// The copy in string `s` of a simplex of `F(i_0)`.
    pub fn place(&self, n: usize, s: usize, y: SimplexRef) -> SimplexRef {
        let d = y.gen_dim();
        SimplexRef::generator(d, y.gen() + self.offsets[n][s][d]).degenerate(y.degeneracy)
    }

    /// The block of string `s`: `F(i_0) -> X_n`.
    pub fn block(&self, n: usize, s: usize, f: &Diagram) -> SimplicialMap {
        let value = f.value(self.strings[n][s].objects[0]).clone();
        SimplicialMap::from_fn(value, self.level(n).clone(), |y| self.place(n, s, y))
    }
}

/// Level `n` of `E_M F`, with its face and degeneracy maps.
pub fn borel_level(
    cat: &SimplicialCategory,
    f: &Diagram,
    n: usize,
) -> Result<(Arc<SimplicialSet>, Vec<SimplicialMap>, Vec<SimplicialMap>)> {
    let b = BorelSpace::new(cat, f, n + 1)?;
    Ok((b.level(n).clone(), b.space.faces[n].clone(), b.space.degeneracies[n].clone()))
}

/// `B M_•`, the nerve, one discrete point per string.
pub fn nerve_space(cat: &SimplicialCategory, top: usize) -> SimplicialSpace {
    let strings: Vec<Vec<MorphString>> = (0..=top).map(|n| self::strings(cat, n)).collect();
    let index: Vec<HashMap<&MorphString, usize>> =
        strings.iter().map(|l| l.iter().enumerate().map(|(i, s)| (s, i)).collect()).collect();
    let levels: Vec<Arc<SimplicialSet>> = strings
        .iter()
        .map(|l| Arc::new(SimplicialSet::discrete(l.iter().map(|s| Label::name(s.describe(cat))))))
        .collect();
    let faces = (0..=top)
        .map(|n| {
            if n == 0 {
                return Vec::new();
            }
            (0..=n)
                .map(|i| {
                    SimplicialMap::from_fn(levels[n].clone(), levels[n - 1].clone(), |v| {
                        SimplexRef::generator(0, index[n - 1][&strings[n][v.gen()].face(cat, i).0])
                    })
                })
                .collect()
        })
        .collect();
    let degeneracies = (0..top)
        .map(|n| {
            (0..=n)
                .map(|k| {
                    SimplicialMap::from_fn(levels[n].clone(), levels[n + 1].clone(), |v| {
                        SimplexRef::generator(0, index[n + 1][&strings[n][v.gen()].degeneracy(cat, k)])
                    })
                })
                .collect()
        })
        .collect();
    SimplicialSpace { levels, faces, degeneracies }
}

/// `‖B M_•‖` truncated at `bound`.
pub fn classifying_space(cat: &SimplicialCategory, bound: usize) -> Result<Realization> {
    thick_realize(&nerve_space(cat, bound), bound)
}

/// `π_M: ‖E_M F‖ -> ‖B M‖` with everything it is built from.
#[derive(Clone, Debug)]
pub struct BorelTotal {
    pub levels: BorelSpace,
    pub base_levels: SimplicialSpace,
    /// `E_M F_n -> B M_n`.
    pub projections: Vec<SimplicialMap>,
    pub total: Realization,
    pub base: Realization,
    pub pi: SimplicialMap,
    pub bound: usize,
}

impl BorelTotal {
    /// The vertex of `‖B M‖` for object `i`.
    pub fn base_vertex(&self, i: usize) -> SimplexRef {
        let v = SimplexRef::generator(0, i);
        self.base.point(0, SimplexRef::generator(0, 0), v).expect("objects are vertices")
    }

    /// `F(i) -> ‖E_M F‖`, onto the fibre over `i`.
    pub fn fiber_inclusion(&self, f: &Diagram, i: usize) -> SimplicialMap {
        let block = self.levels.block(0, i, f);
        let point = self.total.cells[0].factors()[0].clone();
        SimplicialMap::from_fn(block.source().clone(), self.total.set.clone(), |y| {
            let theta = point.apply(SimplexRef::generator(0, 0), &vec![0; y.dim() + 1]);
            self.total.point(0, theta, block.apply(y)).expect("level zero is a cell")
        })
    }
}

pub fn borel_total(cat: &SimplicialCategory, f: &Diagram, bound: usize) -> Result<BorelTotal> {
    let levels = BorelSpace::new(cat, f, bound)?;
    let base_levels = nerve_space(cat, bound);
    let projections: Vec<SimplicialMap> = (0..=bound)
        .map(|n| {
            let target = base_levels.levels[n].clone();
            SimplicialMap::from_fn(levels.level(n).clone(), target.clone(), |x| {
                let (s, _) = levels.locate(n, x);
                target.apply(SimplexRef::generator(0, s), &vec![0; x.dim() + 1])
            })
        })
        .collect();
    let (total, base) = rayon::join(|| thick_realize(&levels.space, bound), || thick_realize(&base_levels, bound));
    let (total, base) = (total?, base?);
    let pi = realize_map(&total, &base, &projections)?;
    Ok(BorelTotal { levels, base_levels, projections, total, base, pi, bound })
}

/// A finite mapping telescope of `α_*: hom(i, 1) -> hom(i, 1)`. The last
/// copy is only the image of `α_*`.
#[derive(Clone, Debug)]
pub struct Telescope {
    pub set: Arc<SimplicialSet>,
    pub stages: usize,
    /// `vertices[m][g]`: element `g` in copy `m`, if present.
    vertices: Vec<Vec<Option<SimplexRef>>>,
    /// `edges[m][g]`: the cylinder edge from copy `m` to copy `m + 1`.
    edges: Vec<Vec<SimplexRef>>,
    cells: HashMap<SimplexRef, (bool, usize, usize)>,
}

pub fn telescope(cat: &SimplicialCategory, i: usize, one: usize, alpha: Morphism, stages: usize) -> Result<Telescope> {
    if alpha.source != one || alpha.target != one {
        return Err(Error::InvalidDiagram(format!("{} is not an endomorphism", cat.describe(alpha))));
    }
    let s = cat.hom(i, one).clone();
    let n = s.count(0);
    let shift = |g: usize| cat.compose(alpha, Morphism { source: i, target: one, index: g }).index;
    let d1 = Arc::new(standard_simplex(1));
    let bd = Arc::new(boundary(1)?);
    let bd_in = SimplicialMap::from_fn(bd.clone(), d1.clone(), |t| d1.find(bd.gen_label(t)).expect("endpoint"));
    let cyl = product(s.clone(), d1.clone(), 2);
    let ends = product(s.clone(), bd.clone(), 2);
    let into_cyl = cyl.lift(&[ends.projection(0), ends.projection(1).then(&bd_in)])?;
    let edge_of = |g: usize| {
        let x = s.apply(SimplexRef::generator(0, g), &[0, 0]);
        cyl.simplex(&[x, delta_simplex(&d1, &[0, 1])]).expect("cylinder edge")
    };

    let mut t = s.clone();
    let mut vertices: Vec<Vec<Option<SimplexRef>>> = vec![(0..n).map(|g| Some(SimplexRef::generator(0, g))).collect()];
    let mut edges: Vec<Vec<SimplexRef>> = Vec::new();
    for m in 0..stages {
        let keep: Vec<usize> = if m + 1 == stages {
            let mut img: Vec<usize> = (0..n).map(shift).collect();
            img.sort_unstable();
            img.dedup();
            img
        } else {
            (0..n).collect()
        };
        let copy = Arc::new(SimplicialSet::discrete(
            keep.iter().map(|&g| Label::Tuple(vec![Label::Index(m + 1), s.gen_label(SimplexRef::generator(0, g)).clone()])),
        ));
        let y = disjoint_union(&[t.clone(), copy]);
        let glue = SimplicialMap::from_fn(ends.set().clone(), y.set.clone(), |z| {
            let parts = ends.parts(z);
            let g = parts[0].gen();
            if delta_vertices(&d1, bd_in.apply(parts[1]))[0] == 0 {
                y.injections[0].apply(vertices[m][g].expect("copy m holds every element"))
            } else {
                let pos = keep.binary_search(&shift(g)).expect("image is kept");
                y.injections[1].apply(SimplexRef::generator(0, pos))
            }
        });
        let po = pushout(&into_cyl, &glue, 2)?;
        let old = y.injections[0].then(&po.from_y);
        for row in &mut vertices {
            for v in row.iter_mut().flatten() {
                *v = old.apply(*v);
            }
        }
        for row in &mut edges {
            for e in row.iter_mut() {
                *e = old.apply(*e);
            }
        }
        let fresh = y.injections[1].then(&po.from_y);
        vertices.push(
            (0..n).map(|g| keep.binary_search(&g).ok().map(|pos| fresh.apply(SimplexRef::generator(0, pos)))).collect(),
        );
        edges.push((0..n).map(|g| po.from_x.apply(edge_of(g))).collect());
        t = po.set;
    }
    let mut cells = HashMap::new();
    for (m, row) in vertices.iter().enumerate() {
        for (g, v) in row.iter().enumerate() {
            if let Some(v) = v {
                cells.insert(*v, (false, m, g));
            }
        }
    }
    for (m, row) in edges.iter().enumerate() {
        for (g, e) in row.iter().enumerate() {
            cells.insert(*e, (true, m, g));
        }
    }
    Ok(Telescope { set: t, stages, vertices, edges, cells })
}

impl Telescope {
    /// The map induced by a map of element sets commuting with `α_*`.
    fn induced(&self, target: &Telescope, elem: impl Fn(usize) -> usize) -> SimplicialMap {
        SimplicialMap::from_fn(self.set.clone(), target.set.clone(), |x| {
            let (edge, m, g) = self.cells[&x];
            if edge {
                target.edges[m][elem(g)]
            } else {
                target.vertices[m][elem(g)].expect("image copy is closed under the action")
            }
        })
    }
}

/// `M_∞` truncated to `stages` cylinders: `F(i)` is the telescope of
/// `α_*` on `hom(i, 1)`, acted on by precomposition.
pub fn telescope_diagram(cat: &SimplicialCategory, one: usize, alpha: Morphism, stages: usize) -> Result<Diagram> {
    let n = cat.object_count();
    let tels: Vec<Telescope> = (0..n).map(|i| telescope(cat, i, one, alpha, stages)).collect::<Result<_>>()?;
    let values = tels.iter().map(|t| t.set.clone()).collect();
    let actions = (0..n)
        .map(|i| {
            (0..n)
                .map(|k| {
                    (0..cat.hom_size(i, k))
                        .map(|f| {
                            let f = Morphism { source: i, target: k, index: f };
                            tels[k].induced(&tels[i], |g| cat.compose(Morphism { source: k, target: one, index: g }, f).index)
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    Diagram::checked(cat, values, actions)
}

#[cfg(test)]
mod tests {
    use super::super::category::{restriction_diagram, trivial_diagram, MonoidTable};
    use super::*;
    use crate::homology::{homology, is_acyclic};

    fn cat(t: MonoidTable) -> SimplicialCategory {
        SimplicialCategory::from_monoid(&t).unwrap()
    }

    #[test]
    fn level_counts() {
        let z2 = cat(MonoidTable::cyclic(2));
        let t = trivial_diagram(&z2);
        assert_eq!(borel_level(&z2, &t, 0).unwrap().0.counts(), vec![1]);
        assert_eq!(borel_level(&z2, &t, 3).unwrap().0.counts(), vec![8]);
        let r = restriction_diagram(&z2, 0);
        let (lvl, faces, _) = borel_level(&z2, &r, 2).unwrap();
        assert_eq!(lvl.counts(), vec![8]);
        assert_eq!(faces.len(), 3);
    }

    #[test]
    fn trivial_diagram_gives_the_nerve() {
        let c = cat(MonoidTable::cyclic(3));
        let e = BorelSpace::new(&c, &trivial_diagram(&c), 3).unwrap();
        let b = nerve_space(&c, 3);
        for n in 0..=3 {
            assert_eq!(e.level(n).counts(), b.levels[n].counts());
            for i in 0..e.space.faces[n].len() {
                assert_eq!(e.space.faces[n][i].images(), b.faces[n][i].images());
            }
        }
    }

    #[test]
    fn classifying_space_of_z2() {
        let c = cat(MonoidTable::cyclic(2));
        let b = classifying_space(&c, 4).unwrap();
        let h: Vec<_> = (0..4).map(|k| homology(&b.set, k).to_string()).collect();
        assert_eq!(h, vec!["Z", "Z/2", "0", "Z/2"]);
    }

    #[test]
    fn borel_of_restriction_is_acyclic() {
        for t in [MonoidTable::cyclic(2), MonoidTable::idempotent()] {
            let c = cat(t);
            let total = borel_total(&c, &restriction_diagram(&c, 0), 3).unwrap();
            assert!(is_acyclic(&total.total.set, 2));
            assert!(total.pi.is_valid());
        }
    }

    #[test]
    fn telescopes() {
        let z2 = cat(MonoidTable::cyclic(2));
        let t = z2.morphism(0, 0, "t").unwrap();
        let tel = telescope(&z2, 0, 0, t, 3).unwrap();
        assert_eq!(homology(&tel.set, 0).free_rank, 2);
        let idem = cat(MonoidTable::idempotent());
        let e = idem.morphism(0, 0, "e").unwrap();
        for k in 1..4 {
            let tel = telescope(&idem, 0, 0, e, k).unwrap();
            assert_eq!(homology(&tel.set, 0).free_rank, 1);
            assert!(homology(&tel.set, 1).is_zero());
        }
        let one = idem.identity(0);
        assert_eq!(homology(&telescope(&idem, 0, 0, one, 2).unwrap().set, 0).free_rank, 2);
        assert!(telescope_diagram(&idem, 0, e, 2).is_ok());
    }
}
