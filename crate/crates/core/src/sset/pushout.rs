//! Colimits along cofibrations: pushouts, subcomplexes and coproducts.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use super::map::SimplicialMap;
use super::set::{Generator, Label, SimplicialSet};
use super::simplex::SimplexRef;
use crate::error::{Error, Result};

/// A pushout `X ⊔_A Y` with its two structure maps.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub set: Arc<SimplicialSet>,
    pub from_x: SimplicialMap,
    pub from_y: SimplicialMap,
}

impl Pushout {
    /// The map out of the pushout induced by `u: X -> Z` and `v: Y -> Z`.
    pub fn induced(&self, u: &SimplicialMap, v: &SimplicialMap) -> SimplicialMap {
        let target = v.target().clone();
        let mut images: Vec<Vec<SimplexRef>> =
            (0..=self.set.max_dim()).map(|d| Vec::with_capacity(self.set.count(d))).collect();
        let y = self.from_y.source();
        for d in 0..=self.set.max_dim() {
            for g in 0..y.count(d) {
                images[d].push(v.image_of_generator(d, g));
            }
        }
        let x = self.from_x.source();
        let mut extra: Vec<(SimplexRef, SimplexRef)> = Vec::new();
        for d in 0..=x.max_dim() {
            for g in 0..x.count(d) {
                let p = self.from_x.image_of_generator(d, g);
                if !p.is_degenerate() && p.gen() >= y.count(d) {
                    extra.push((p, u.image_of_generator(d, g)));
                }
            }
        }
        extra.sort_unstable();
        for (p, img) in extra {
            let level = &mut images[p.dim()];
            if level.len() == p.gen() {
                level.push(img);
            }
        }
        SimplicialMap::new_unchecked(self.set.clone(), target, images)
    }
}

/// Pushout of `i: A -> X` (injective on generators) and `j: A -> Y`, keeping
/// generators of degree at most `bound`.
pub fn pushout(i: &SimplicialMap, j: &SimplicialMap, bound: usize) -> Result<Pushout> {
    if !i.is_injective() {
        return Err(Error::NonInjectiveCofibration(
            "two generators share an image, or one lands on a degenerate simplex".into(),
        ));
    }
    let x = i.target();
    let y = j.target();
    // generator of X hit by i -> image of the same A-generator under j
    let mut glued: HashMap<SimplexRef, SimplexRef> = HashMap::new();
    for (d, level) in i.images().iter().enumerate() {
        for (g, &xi) in level.iter().enumerate() {
            glued.insert(xi, j.image_of_generator(d, g));
        }
    }
    let top = x.max_dim().max(y.max_dim()).min(bound);
    let mut levels: Vec<Vec<Generator>> =
        (0..=top).map(|d| y.level(d).to_vec()).collect();
    let mut x_images: Vec<Vec<SimplexRef>> = (0..=x.max_dim()).map(|d| Vec::with_capacity(x.count(d))).collect();
    let mut dropped = y.dim().is_some_and(|yd| yd > bound);
    let route = |f: SimplexRef, x_images: &Vec<Vec<SimplexRef>>| -> SimplexRef {
        x_images[f.gen_dim()][f.gen()].degenerate(f.degeneracy)
    };
    for d in 0..=x.max_dim() {
        for g in 0..x.count(d) {
            let xg = SimplexRef::generator(d, g);
            if let Some(&target) = glued.get(&xg) {
                x_images[d].push(target);
                continue;
            }
            if d > top {
                dropped = true;
                x_images[d].push(xg);
                continue;
            }
            let gen = x.generator(d, g);
            let faces = gen.faces.iter().map(|&f| route(f, &x_images)).collect();
            levels[d].push(Generator { label: gen.label.clone(), faces });
            x_images[d].push(SimplexRef::generator(d, levels[d].len() - 1));
        }
    }
    let truncation = [x.truncation(), y.truncation(), dropped.then_some(bound)].into_iter().flatten().min();
    let set = Arc::new(SimplicialSet::from_levels_unchecked(levels, truncation));
    let x_images: Vec<Vec<SimplexRef>> = x_images.into_iter().take(top + 1).collect();
    let from_x = SimplicialMap::new_unchecked(x.clone(), set.clone(), x_images);
    let y_images = (0..=y.max_dim().min(top))
        .map(|d| (0..y.count(d)).map(|g| SimplexRef::generator(d, g)).collect())
        .collect();
    let from_y = SimplicialMap::new_unchecked(y.clone(), set.clone(), y_images);
    Ok(Pushout { set, from_x, from_y })
}

/// A sub-simplicial set with its inclusion.
#[derive(Clone, Debug)]
pub struct Subcomplex {
    pub set: Arc<SimplicialSet>,
    pub inclusion: SimplicialMap,
}

impl Subcomplex {
    /// The subcomplex simplex corresponding to a simplex of the ambient set.
    pub fn restrict(&self, x: SimplexRef) -> Option<SimplexRef> {
        let level = self.inclusion.images().get(x.gen_dim())?;
        let pos = level.binary_search(&x.core()).ok()?;
        Some(SimplexRef::generator(x.gen_dim(), pos).degenerate(x.degeneracy))
    }
}

/// The face closure of a set of generators.
pub fn closure(x: &SimplicialSet, gens: impl IntoIterator<Item = SimplexRef>) -> BTreeSet<SimplexRef> {
    let mut out = BTreeSet::new();
    let mut stack: Vec<SimplexRef> = gens.into_iter().map(SimplexRef::core).collect();
    while let Some(g) = stack.pop() {
        if out.insert(g) && g.dim() > 0 {
            stack.extend(x.generator(g.dim(), g.gen()).faces.iter().map(|f| f.core()));
        }
    }
    out
}

/// The sub-simplicial set on the given generators, which must be closed under
/// faces. Generator order follows the ambient order.
pub fn subcomplex(x: &Arc<SimplicialSet>, gens: &BTreeSet<SimplexRef>) -> Result<Subcomplex> {
    let mut index: HashMap<SimplexRef, usize> = HashMap::new();
    let mut levels: Vec<Vec<Generator>> = vec![Vec::new(); x.max_dim() + 1];
    let mut images: Vec<Vec<SimplexRef>> = vec![Vec::new(); x.max_dim() + 1];
    for &g in gens {
        let d = g.dim();
        let gen = x.generator(d, g.gen());
        let mut faces = Vec::with_capacity(gen.faces.len());
        for &f in &gen.faces {
            let Some(&pos) = index.get(&f.core()) else {
                return Err(Error::NotClosed(format!("{} lacks face {}", gen.label, x.label(f))));
            };
            faces.push(SimplexRef::generator(f.gen_dim(), pos).degenerate(f.degeneracy));
        }
        index.insert(g, levels[d].len());
        levels[d].push(Generator { label: gen.label.clone(), faces });
        images[d].push(g);
    }
    let set = Arc::new(SimplicialSet::from_levels_unchecked(levels, x.truncation()));
    let inclusion = SimplicialMap::new_unchecked(set.clone(), x.clone(), images);
    Ok(Subcomplex { set, inclusion })
}

/// The largest sub-simplicial set whose generators satisfy `keep`.
pub fn full_subcomplex(x: &Arc<SimplicialSet>, mut keep: impl FnMut(SimplexRef) -> bool) -> Subcomplex {
    let mut chosen: BTreeSet<SimplexRef> = BTreeSet::new();
    for g in x.generators() {
        let faces_in = g.dim() == 0
            || x.generator(g.dim(), g.gen()).faces.iter().all(|f| chosen.contains(&f.core()));
        if faces_in && keep(g) {
            chosen.insert(g);
        }
    }
    subcomplex(x, &chosen).expect("chosen generators are face-closed by construction")
}

/// Coproduct with its injections. Labels are tagged by summand index.
#[derive(Clone, Debug)]
pub struct Coproduct {
    pub set: Arc<SimplicialSet>,
    pub injections: Vec<SimplicialMap>,
}

impl Coproduct {
    /// Which summand a simplex lies in, with its preimage there.
    pub fn locate(&self, x: SimplexRef) -> (usize, SimplexRef) {
        let d = x.gen_dim();
        let mut g = x.gen();
        for (c, inj) in self.injections.iter().enumerate() {
            let n = inj.source().count(d);
            if g < n {
                return (c, SimplexRef::generator(d, g).degenerate(x.degeneracy));
            }
            g -= n;
        }
        panic!("simplex outside the coproduct")
    }
}

pub fn disjoint_union(parts: &[Arc<SimplicialSet>]) -> Coproduct {
    let top = parts.iter().map(|p| p.max_dim()).max().unwrap_or(0);
    let mut levels: Vec<Vec<Generator>> = vec![Vec::new(); top + 1];
    let mut offsets: Vec<Vec<usize>> = Vec::with_capacity(parts.len());
    for (c, p) in parts.iter().enumerate() {
        let off: Vec<usize> = (0..=top).map(|d| levels[d].len()).collect();
        for d in 0..=p.max_dim() {
            for gen in p.level(d) {
                let faces = gen
                    .faces
                    .iter()
                    .map(|f| SimplexRef { gen: (f.gen() + off[f.gen_dim()]) as u32, ..*f })
                    .collect();
                levels[d].push(Generator { label: Label::tag(c.to_string(), gen.label.clone()), faces });
            }
        }
        offsets.push(off);
    }
    let truncation = parts.iter().filter_map(|p| p.truncation()).min();
    let set = Arc::new(SimplicialSet::from_levels_unchecked(levels, truncation));
    let injections = parts
        .iter()
        .zip(&offsets)
        .map(|(p, off)| {
            SimplicialMap::from_fn(p.clone(), set.clone(), |x| SimplexRef::generator(x.dim(), x.gen() + off[x.dim()]))
        })
        .collect();
    Coproduct { set, injections }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::{boundary, standard_simplex};

    #[test]
    fn circle_from_interval() {
        let d1 = Arc::new(standard_simplex(1));
        let ends = Arc::new(boundary(1).unwrap());
        let pt = Arc::new(SimplicialSet::point());
        let incl = SimplicialMap::from_fn(ends.clone(), d1.clone(), |x| x);
        let fold = SimplicialMap::constant(ends, pt, SimplexRef::generator(0, 0));
        let p = pushout(&incl, &fold, 4).unwrap();
        assert_eq!(p.set.counts(), vec![1, 1]);
        assert!(p.set.validate().is_empty());
        assert!(p.from_x.is_valid());
        assert!(p.from_y.is_valid());
    }

    #[test]
    fn non_injective_leg_rejected() {
        let two = Arc::new(boundary(1).unwrap());
        let pt = Arc::new(SimplicialSet::point());
        let fold = SimplicialMap::constant(two, pt, SimplexRef::generator(0, 0));
        assert!(matches!(pushout(&fold, &fold, 3), Err(Error::NonInjectiveCofibration(_))));
    }

    #[test]
    fn empty_pushout_is_disjoint_union() {
        let e = Arc::new(SimplicialSet::empty());
        let x = Arc::new(standard_simplex(1));
        let y = Arc::new(boundary(2).unwrap());
        let i = SimplicialMap::from_fn(e.clone(), x.clone(), |s| s);
        let j = SimplicialMap::from_fn(e, y.clone(), |s| s);
        let p = pushout(&i, &j, 4).unwrap();
        let u = disjoint_union(&[x, y]);
        assert_eq!(p.set.counts(), u.set.counts());
    }

    #[test]
    fn disjoint_union_counts_add() {
        let u = disjoint_union(&[]);
        assert!(u.set.is_empty());
        let pt = Arc::new(SimplicialSet::point());
        assert_eq!(disjoint_union(&[pt.clone(), pt]).set.counts(), vec![2]);
        let u = disjoint_union(&[Arc::new(standard_simplex(1)), Arc::new(boundary(2).unwrap())]);
        assert_eq!(u.set.counts(), vec![5, 4]);
        assert!(u.set.validate().is_empty());
        assert!(u.injections.iter().all(SimplicialMap::is_valid));
    }

    #[test]
    fn subcomplex_requires_closure() {
        let d2 = Arc::new(standard_simplex(2));
        let top: BTreeSet<_> = [SimplexRef::generator(2, 0)].into();
        assert!(subcomplex(&d2, &top).is_err());
        let closed = closure(&d2, top);
        assert_eq!(closed.len(), 7);
        let s = subcomplex(&d2, &closed).unwrap();
        assert!(s.inclusion.is_isomorphism());
    }
}
