//! Finite limits: products and pullbacks over a common base, in EZ normal form.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use super::map::SimplicialMap;
use super::set::{Generator, Label, SimplicialSet};
use super::simplex::{Degeneracy, SimplexRef};
use crate::error::{Error, Result};

/// A simplicial set whose simplices are compatible tuples of simplices of its
/// factors. Products and pullbacks are both stored this way.
#[derive(Clone, Debug)]
pub struct TupleSet {
    set: Arc<SimplicialSet>,
    factors: Vec<Arc<SimplicialSet>>,
    parts: Vec<Vec<Vec<SimplexRef>>>,
    index: HashMap<Vec<SimplexRef>, SimplexRef>,
}

/// Simplices of a space grouped by their image in a base, per degree.
/// Reusable across many pullbacks along the same map.
#[derive(Clone, Debug)]
pub struct PullbackIndex {
    map: SimplicialMap,
    by_image: Vec<HashMap<SimplexRef, Vec<SimplexRef>>>,
}

impl PullbackIndex {
    pub fn new(map: SimplicialMap, max_k: usize) -> Self {
        let by_image = (0..=max_k)
            .into_par_iter()
            .map(|k| group_by_image(&map, k))
            .collect();
        PullbackIndex { map, by_image }
    }

    pub fn map(&self) -> &SimplicialMap {
        &self.map
    }

    pub fn max_k(&self) -> usize {
        self.by_image.len() - 1
    }

    fn fiber(&self, k: usize, y: SimplexRef) -> &[SimplexRef] {
        self.by_image[k].get(&y).map_or(&[], Vec::as_slice)
    }
}

fn group_by_image(map: &SimplicialMap, k: usize) -> HashMap<SimplexRef, Vec<SimplexRef>> {
    let mut out: HashMap<SimplexRef, Vec<SimplexRef>> = HashMap::new();
    for x in map.source().simplices(k) {
        out.entry(map.apply(x)).or_default().push(x);
    }
    out
}

/// Top degree a product of sets can have a nondegenerate simplex in.
fn product_top(factors: &[Arc<SimplicialSet>]) -> Option<usize> {
    factors.iter().map(|f| f.dim()).sum::<Option<usize>>()
}

fn combined_truncation(factors: &[Arc<SimplicialSet>], bound: usize, top: Option<usize>) -> Option<usize> {
    let own = match top {
        Some(t) if t > bound => Some(bound),
        _ => None,
    };
    factors.iter().filter_map(|f| f.truncation()).chain(own).min()
}

impl TupleSet {
    /// Product of any number of factors, truncated at `bound`.
    pub fn product(factors: Vec<Arc<SimplicialSet>>, bound: usize) -> Self {
        let top = product_top(&factors);
        let truncation = combined_truncation(&factors, bound, top);
        let dim_cap = top.map_or(0, |t| t.min(bound));
        let tuples: Vec<Vec<Vec<SimplexRef>>> = (0..=dim_cap)
            .into_par_iter()
            .map(|k| {
                let per: Vec<Vec<SimplexRef>> = factors.iter().map(|f| f.simplices(k)).collect();
                nondegenerate_tuples(&per)
            })
            .collect();
        Self::assemble(factors, tuples, truncation, dim_cap)
    }

    /// Pullback of maps into a common base, truncated at `bound`.
    pub fn pullback(maps: &[SimplicialMap], bound: usize) -> Result<Self> {
        let top = product_top(&maps.iter().map(|m| m.source().clone()).collect::<Vec<_>>());
        let cap = top.map_or(0, |t| t.min(bound));
        let indices: Vec<PullbackIndex> = maps.iter().map(|m| PullbackIndex::new(m.clone(), cap)).collect();
        Self::pullback_indexed(&indices.iter().collect::<Vec<_>>(), bound)
    }

    /// Pullback using precomputed fiber indices.
    pub fn pullback_indexed(indices: &[&PullbackIndex], bound: usize) -> Result<Self> {
        let Some(first) = indices.first() else {
            return Ok(Self::product(Vec::new(), bound));
        };
        let base = first.map.target();
        if indices.iter().any(|ix| !Arc::ptr_eq(ix.map.target(), base) && **ix.map.target() != **base) {
            return Err(Error::MismatchedTargets);
        }
        let factors: Vec<Arc<SimplicialSet>> = indices.iter().map(|ix| ix.map.source().clone()).collect();
        let top = product_top(&factors);
        let truncation = combined_truncation(&factors, bound, top);
        let dim_cap = top.map_or(0, |t| t.min(bound));
        assert!(indices.iter().all(|ix| ix.max_k() >= dim_cap), "pullback index too shallow");
        let tuples: Vec<Vec<Vec<SimplexRef>>> = (0..=dim_cap)
            .into_par_iter()
            .map(|k| {
                let mut keys: Vec<SimplexRef> = first.by_image[k].keys().copied().collect();
                keys.sort_unstable();
                let mut out = Vec::new();
                for y in keys {
                    let per: Vec<Vec<SimplexRef>> = indices.iter().map(|ix| ix.fiber(k, y).to_vec()).collect();
                    if per.iter().any(Vec::is_empty) {
                        continue;
                    }
                    out.extend(nondegenerate_tuples(&per));
                }
                out.sort_unstable();
                out
            })
            .collect();
        Ok(Self::assemble(factors, tuples, truncation, dim_cap))
    }

    fn assemble(
        factors: Vec<Arc<SimplicialSet>>,
        tuples: Vec<Vec<Vec<SimplexRef>>>,
        truncation: Option<usize>,
        dim_cap: usize,
    ) -> Self {
        let mut index = HashMap::new();
        for (d, level) in tuples.iter().enumerate() {
            for (g, t) in level.iter().enumerate() {
                index.insert(t.clone(), SimplexRef::generator(d, g));
            }
        }
        let mut partial = TupleSet {
            set: Arc::new(SimplicialSet::empty()),
            factors,
            parts: tuples,
            index,
        };
        let levels: Vec<Vec<Generator>> = partial
            .parts
            .par_iter()
            .enumerate()
            .map(|(d, level)| {
                level
                    .iter()
                    .map(|t| {
                        let label = Label::Tuple(
                            t.iter().zip(&partial.factors).map(|(&x, f)| f.label(x)).collect(),
                        );
                        let faces = if d == 0 {
                            Vec::new()
                        } else {
                            (0..=d)
                                .map(|i| {
                                    let face: Vec<SimplexRef> =
                                        t.iter().zip(&partial.factors).map(|(&x, f)| f.face(x, i)).collect();
                                    partial.simplex(&face).expect("faces of a compatible tuple stay compatible")
                                })
                                .collect()
                        };
                        Generator { label, faces }
                    })
                    .collect()
            })
            .collect();
        let set = SimplicialSet::from_levels_unchecked(levels, truncation).padded_to(dim_cap);
        partial.set = Arc::new(set);
        partial
    }

    pub fn set(&self) -> &Arc<SimplicialSet> {
        &self.set
    }

    pub fn factors(&self) -> &[Arc<SimplicialSet>] {
        &self.factors
    }

    /// Components of a simplex of the tuple set.
    pub fn parts(&self, x: SimplexRef) -> Vec<SimplexRef> {
        self.parts[x.gen_dim()][x.gen()].iter().map(|p| p.degenerate(x.degeneracy)).collect()
    }

    /// The simplex with the given components, if it lies in the tuple set.
    pub fn simplex(&self, parts: &[SimplexRef]) -> Option<SimplexRef> {
        let k = parts.first().map_or(0, |p| p.dim());
        let common = parts.iter().fold(u32::MAX, |acc, p| acc & p.degeneracy.mask());
        let common = if parts.is_empty() { 0 } else { common };
        if common == 0 {
            return self.index.get(parts).copied();
        }
        let eps = Degeneracy::from_mask(common);
        let section = section_of(eps, k);
        let core: Vec<SimplexRef> =
            parts.iter().zip(&self.factors).map(|(&p, f)| f.apply(p, &section)).collect();
        let c = self.index.get(&core)?;
        Some(c.degenerate(eps))
    }

    /// Projection onto factor `j`.
    pub fn projection(&self, j: usize) -> SimplicialMap {
        SimplicialMap::from_fn(self.set.clone(), self.factors[j].clone(), |x| self.parts[x.dim()][x.gen()][j])
    }

    /// The map `K -> self` with the given components.
    pub fn lift(&self, maps: &[SimplicialMap]) -> Result<SimplicialMap> {
        let source = maps.first().map(|m| m.source().clone()).ok_or(Error::MismatchedTargets)?;
        let mut failure = None;
        let lifted = SimplicialMap::from_fn(source.clone(), self.set.clone(), |x| {
            let parts: Vec<SimplexRef> = maps.iter().map(|m| m.apply(x)).collect();
            self.simplex(&parts).unwrap_or_else(|| {
                failure.get_or_insert_with(|| format!("{} has incompatible components", source.label(x)));
                x
            })
        });
        match failure {
            Some(msg) => Err(Error::NotSimplicial(msg)),
            None => Ok(lifted),
        }
    }
}

/// Section of the surjection with repeat set `eps` on `[k]`: first of each fiber.
pub(crate) fn section_of(eps: Degeneracy, k: usize) -> Vec<usize> {
    let eta = eps.surjection(k);
    let mut out = Vec::with_capacity(k + 1 - eps.len());
    for (t, &v) in eta.iter().enumerate() {
        if t == 0 || eta[t - 1] != v {
            out.push(t);
        }
    }
    out
}

/// All tuples from the given per-factor lists whose degeneracy masks share no
/// index, in lexicographic order.
fn nondegenerate_tuples(per: &[Vec<SimplexRef>]) -> Vec<Vec<SimplexRef>> {
    fn rec(per: &[Vec<SimplexRef>], acc: u32, cur: &mut Vec<SimplexRef>, out: &mut Vec<Vec<SimplexRef>>) {
        let depth = cur.len();
        if depth == per.len() {
            if acc == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for &x in &per[depth] {
            cur.push(x);
            rec(per, acc & x.degeneracy.mask(), cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if per.is_empty() {
        // the empty product is a point
        out.push(Vec::new());
        return out;
    }
    rec(per, u32::MAX, &mut Vec::with_capacity(per.len()), &mut out);
    out.sort_unstable();
    out
}

/// Binary product with its two projections.
pub fn product(x: Arc<SimplicialSet>, y: Arc<SimplicialSet>, bound: usize) -> TupleSet {
    TupleSet::product(vec![x, y], bound)
}

/// Binary pullback of `f: X -> B` and `g: Y -> B`.
pub fn pullback(f: &SimplicialMap, g: &SimplicialMap, bound: usize) -> Result<TupleSet> {
    TupleSet::pullback(&[f.clone(), g.clone()], bound)
}
