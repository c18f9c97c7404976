//! Barycentric subdivision, subdivision of maps over a simplex, stars, the
//! star retraction and homotopy, and the cube decomposition.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sset::{
    delta_vertices, factor, full_subcomplex, nerve_of_poset, product, standard_simplex, Degeneracy, Generator,
    Label, SimplexRef, SimplicialMap, SimplicialSet, Subcomplex, TupleSet,
};

/// A chain of faces of a standard simplex as vertex masks, nondecreasing.
pub type FaceChain = Vec<u32>;

fn full_mask(p: usize) -> u32 {
    if p >= 31 {
        u32::MAX
    } else {
        (1u32 << (p + 1)) - 1
    }
}

fn bits(mask: u32) -> Vec<usize> {
    (0..32).filter(|v| mask & (1 << v) != 0).collect()
}

/// Image of a vertex mask under a vertex map.
fn image_mask(mask: u32, values: &[usize]) -> u32 {
    bits(mask).into_iter().fold(0, |m, v| m | (1 << values[v]))
}

/// Positions of the bits of `mask` inside `within`.
fn compress(mask: u32, within: u32) -> u32 {
    let mut out = 0;
    for (pos, v) in bits(within).into_iter().enumerate() {
        if mask & (1 << v) != 0 {
            out |= 1 << pos;
        }
    }
    out
}

/// Strictly increasing chains of nonempty faces of `Δ[p]` ending at the full face.
fn top_chains(p: usize) -> Vec<FaceChain> {
    fn rec(cur: &mut Vec<u32>, out: &mut Vec<FaceChain>) {
        out.push(cur.iter().rev().copied().collect());
        let last = *cur.last().unwrap();
        // proper nonempty submasks of `last`
        let mut sub = (last - 1) & last;
        while sub != 0 {
            cur.push(sub);
            rec(cur, out);
            cur.pop();
            sub = (sub - 1) & last;
        }
    }
    let mut out = Vec::new();
    rec(&mut vec![full_mask(p)], &mut out);
    out.sort();
    out
}

/// `Sd X`, with generators `[x, μ]` for `x` nondegenerate and `μ` a strict
/// chain of faces ending at the top face of `x`.
#[derive(Clone, Debug)]
pub struct Subdivision {
    source: Arc<SimplicialSet>,
    set: Arc<SimplicialSet>,
    cells: Vec<Vec<(SimplexRef, FaceChain)>>,
    index: HashMap<(SimplexRef, FaceChain), usize>,
}

impl Subdivision {
    pub fn new(x: Arc<SimplicialSet>) -> Self {
        let top = x.dim().unwrap_or(0);
        let chains: Vec<Vec<FaceChain>> = (0..=top).map(top_chains).collect();
        let mut cells: Vec<Vec<(SimplexRef, FaceChain)>> = vec![Vec::new(); top + 1];
        for g in x.generators() {
            for c in &chains[g.dim()] {
                cells[c.len() - 1].push((g, c.clone()));
            }
        }
        for level in &mut cells {
            level.sort();
        }
        let mut index = HashMap::new();
        for level in &cells {
            for (i, cell) in level.iter().enumerate() {
                index.insert(cell.clone(), i);
            }
        }
        let mut sd = Subdivision { source: x.clone(), set: Arc::new(SimplicialSet::empty()), cells, index };
        let levels: Vec<Vec<Generator>> = sd
            .cells
            .par_iter()
            .enumerate()
            .map(|(q, level)| {
                level
                    .iter()
                    .map(|(g, chain)| {
                        let label = Label::Tuple(vec![x.gen_label(*g).clone(), Label::Chain(chain.clone())]);
                        let faces = if q == 0 {
                            Vec::new()
                        } else {
                            (0..=q)
                                .map(|i| {
                                    let mut c = chain.clone();
                                    c.remove(i);
                                    sd.class(*g, c)
                                })
                                .collect()
                        };
                        Generator { label, faces }
                    })
                    .collect()
            })
            .collect();
        sd.set = Arc::new(SimplicialSet::from_levels_unchecked(levels, x.truncation()).padded_to(x.max_dim()));
        sd
    }

    pub fn source(&self) -> &Arc<SimplicialSet> {
        &self.source
    }

    pub fn set(&self) -> &Arc<SimplicialSet> {
        &self.set
    }

    /// Normal form of `[x, μ]` for any simplex `x` and nondecreasing chain
    /// of faces of `Δ[dim x]`.
    pub fn class(&self, mut x: SimplexRef, mut chain: FaceChain) -> SimplexRef {
        let src = &self.source;
        loop {
            if x.is_degenerate() {
                let eta = x.degeneracy.surjection(x.dim());
                for m in &mut chain {
                    *m = image_mask(*m, &eta);
                }
                x = x.core();
            }
            let top = *chain.last().expect("chains are nonempty");
            if top == full_mask(x.dim()) {
                break;
            }
            x = src.apply(x, &bits(top));
            for m in &mut chain {
                *m = compress(*m, top);
            }
        }
        let mut rep = 0u32;
        let mut strict: FaceChain = Vec::with_capacity(chain.len());
        for (t, &m) in chain.iter().enumerate() {
            if t > 0 && chain[t - 1] == m {
                rep |= 1 << (t - 1);
            } else {
                strict.push(m);
            }
        }
        let q = strict.len() - 1;
        let gen = self.index[&(x, strict)];
        SimplexRef::generator(q, gen).degenerate(Degeneracy::from_mask(rep))
    }

    /// A representative `(x, μ)` of a simplex, with `μ` carrying the repeats.
    pub fn cell(&self, s: SimplexRef) -> (SimplexRef, FaceChain) {
        let (x, strict) = &self.cells[s.gen_dim()][s.gen()];
        let chain = s.degeneracy.surjection(s.dim()).into_iter().map(|t| strict[t]).collect();
        (*x, chain)
    }

    /// The last-vertex map `Sd X -> X`.
    pub fn last_vertex(&self) -> SimplicialMap {
        SimplicialMap::from_fn(self.set.clone(), self.source.clone(), |s| {
            let (x, chain) = &self.cells[s.dim()][s.gen()];
            let theta: Vec<usize> = chain.iter().map(|m| 31 - m.leading_zeros() as usize).collect();
            self.source.apply(*x, &theta)
        })
    }

    /// `Sd g: Sd X -> Sd Y` for `g: X -> Y`.
    pub fn map(&self, g: &SimplicialMap, target: &Subdivision) -> SimplicialMap {
        SimplicialMap::from_fn(self.set.clone(), target.set.clone(), |s| {
            let (x, chain) = &self.cells[s.dim()][s.gen()];
            target.class(g.apply(*x), chain.clone())
        })
    }
}

pub fn sd(x: Arc<SimplicialSet>) -> Subdivision {
    Subdivision::new(x)
}

/// `Δ'[n]`, the nerve of the poset of nonempty faces of `Δ[n]`.
pub fn barycentric_delta(n: usize) -> SimplicialSet {
    let faces: Vec<u32> = (1..=full_mask(n)).collect();
    nerve_of_poset(
        faces.len(),
        |a, b| faces[a] != faces[b] && faces[a] & faces[b] == faces[a],
        |c| Label::Chain(c.iter().map(|&i| faces[i]).collect()),
    )
}

fn is_standard_simplex(x: &SimplicialSet) -> Option<usize> {
    let n = x.dim()?;
    (*x == standard_simplex(n)).then_some(n)
}

/// `Sd f: Sd E -> Δ'[n]` for a map `f: E -> Δ[n]`.
#[derive(Clone, Debug)]
pub struct SubdividedMap {
    pub f: SimplicialMap,
    pub n: usize,
    pub sd: Subdivision,
    pub target: Arc<SimplicialSet>,
    pub map: SimplicialMap,
    /// The face chain `ν` of each generator of `Sd E`, with repeats.
    nu: Vec<Vec<FaceChain>>,
}

pub fn sd_over_simplex(f: &SimplicialMap) -> Result<SubdividedMap> {
    let n = is_standard_simplex(f.target()).ok_or(Error::NotASimplex)?;
    let delta = f.target().clone();
    let sdx = Subdivision::new(f.source().clone());
    let target = Arc::new(barycentric_delta(n));
    let nu: Vec<Vec<FaceChain>> = sdx
        .cells
        .iter()
        .map(|level| {
            level
                .iter()
                .map(|(x, chain)| {
                    let w = delta_vertices(&delta, f.apply(*x));
                    chain.iter().map(|&m| image_mask(m, &w)).collect()
                })
                .collect()
        })
        .collect();
    let map = SimplicialMap::from_fn(sdx.set.clone(), target.clone(), |s| {
        let chain = &nu[s.dim()][s.gen()];
        let (eps, strict) = factor(&chain.iter().map(|&m| m as usize).collect::<Vec<_>>());
        let strict: FaceChain = strict.into_iter().map(|m| m as u32).collect();
        target.find(&Label::Chain(strict)).expect("image chain lies in the subdivision").degenerate(eps)
    });
    Ok(SubdividedMap { f: f.clone(), n, sd: sdx, target, map, nu })
}

impl SubdividedMap {
    pub fn source(&self) -> &Arc<SimplicialSet> {
        self.sd.set()
    }

    /// `ν` of a generator of `Sd E`.
    pub fn nu(&self, g: SimplexRef) -> &FaceChain {
        &self.nu[g.dim()][g.gen()]
    }

    /// `ESt(α)`: the preimage of `St(α)`.
    pub fn est(&self, alpha: u32) -> Subcomplex {
        full_subcomplex(self.sd.set(), |g| self.nu(g).iter().all(|&m| m & alpha == alpha))
    }

    /// `Sdf⁻¹(α)`: generators whose whole chain maps to `α`.
    pub fn preimage(&self, alpha: u32) -> Subcomplex {
        full_subcomplex(self.sd.set(), |g| self.nu(g).iter().all(|&m| m == alpha))
    }

    /// Preimage of the barycenter of `Δ'[n]`.
    pub fn barycenter_preimage(&self) -> Subcomplex {
        self.preimage(full_mask(self.n))
    }

    /// `μ̄`: the part of each face that lands in `α`.
    fn bar(&self, x: SimplexRef, chain: &[u32], alpha: u32) -> FaceChain {
        let w = delta_vertices(self.f.target(), self.f.apply(x));
        chain
            .iter()
            .map(|&m| bits(m).into_iter().filter(|&v| alpha & (1 << w[v]) != 0).fold(0, |acc, v| acc | (1 << v)))
            .collect()
    }

    /// The retraction `r` and homotopy `H` of the star lemma.
    pub fn star_retraction(&self, alpha: u32) -> Result<StarLemma> {
        let est = self.est(alpha);
        let fiber = self.preimage(alpha);
        if est.set.is_empty() {
            return Err(Error::UnknownSimplex(format!("ESt of {alpha:#b} is empty")));
        }
        let into_est = |s: SimplexRef| est.restrict(s).expect("stays inside the star");
        let inclusion = SimplicialMap::from_fn(fiber.set.clone(), est.set.clone(), |g| {
            into_est(fiber.inclusion.apply(g))
        });
        let retraction = SimplicialMap::from_fn(est.set.clone(), fiber.set.clone(), |g| {
            let (x, chain) = self.sd.cell(est.inclusion.apply(g));
            let image = self.sd.class(x, self.bar(x, &chain, alpha));
            fiber.restrict(image).expect("retraction lands in the preimage")
        });
        let d1 = Arc::new(standard_simplex(1));
        let cylinder = product(est.set.clone(), d1.clone(), est.set.max_dim() + 1);
        let homotopy = SimplicialMap::from_fn(cylinder.set().clone(), est.set.clone(), |g| {
            let parts = cylinder.parts(g);
            let (x, chain) = self.sd.cell(est.inclusion.apply(parts[0]));
            let zeros = delta_vertices(&d1, parts[1]).iter().filter(|&&v| v == 0).count();
            let bar = self.bar(x, &chain, alpha);
            let mixed: FaceChain = chain.iter().enumerate().map(|(t, &m)| if t < zeros { bar[t] } else { m }).collect();
            into_est(self.sd.class(x, mixed))
        });
        Ok(StarLemma { alpha, est, fiber, inclusion, retraction, cylinder, homotopy, interval: d1 })
    }

    /// The diagram `σ ↦ ESt(σ)` over the nondegenerate simplices of `Δ[n]`,
    /// with its strict colimit compared against `Sd E`.
    pub fn cube_decomposition(&self) -> Result<CubeDiagram> {
        let objects: Vec<u32> = (1..=full_mask(self.n)).collect();
        let values: Vec<Subcomplex> = objects.par_iter().map(|&a| self.est(a)).collect();
        let pos: HashMap<u32, usize> = objects.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let mut morphisms = Vec::new();
        for (i, &a) in objects.iter().enumerate() {
            for v in bits(a) {
                let b = a & !(1 << v);
                if b != 0 {
                    morphisms.push((i, pos[&b]));
                }
            }
        }
        // union-find over (object, generator)
        let mut offsets = vec![Vec::new(); objects.len()];
        let mut total = 0usize;
        for (i, val) in values.iter().enumerate() {
            for d in 0..=val.set.max_dim() {
                offsets[i].push(total);
                total += val.set.count(d);
            }
        }
        let node = |i: usize, g: SimplexRef| offsets[i][g.dim()] + g.gen();
        let mut parent: Vec<usize> = (0..total).collect();
        fn find(parent: &mut [usize], mut a: usize) -> usize {
            while parent[a] != a {
                parent[a] = parent[parent[a]];
                a = parent[a];
            }
            a
        }
        for &(i, j) in &morphisms {
            for g in values[i].set.generators() {
                let in_sd = values[i].inclusion.apply(g);
                let Some(h) = values[j].restrict(in_sd) else {
                    return Err(Error::ColimitMismatch(format!(
                        "ESt({:#b}) is not inside ESt({:#b})",
                        objects[i], objects[j]
                    )));
                };
                let (a, b) = (find(&mut parent, node(i, g)), find(&mut parent, node(j, h)));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        // classes in order of their smallest node, grouped by degree
        let mut reps: BTreeMap<usize, (usize, SimplexRef)> = BTreeMap::new();
        for (i, val) in values.iter().enumerate() {
            for g in val.set.generators() {
                let r = find(&mut parent, node(i, g));
                reps.entry(r).or_insert((i, g));
            }
        }
        let top = self.sd.set().max_dim();
        let mut class_index: HashMap<usize, SimplexRef> = HashMap::new();
        let mut levels: Vec<Vec<Generator>> = vec![Vec::new(); top + 1];
        let mut to_sd: Vec<Vec<SimplexRef>> = vec![Vec::new(); top + 1];
        let mut ordered: Vec<(usize, (usize, SimplexRef))> = reps.into_iter().collect();
        ordered.sort_by_key(|(r, (_, g))| (g.dim(), *r));
        for (r, (_, g)) in &ordered {
            let d = g.dim();
            class_index.insert(*r, SimplexRef::generator(d, levels[d].len()));
            levels[d].push(Generator { label: Label::Index(*r), faces: Vec::new() });
        }
        for (r, (i, g)) in &ordered {
            let c = class_index[r];
            let val = &values[*i];
            let faces: Vec<SimplexRef> = val
                .set
                .generator(g.dim(), g.gen())
                .faces
                .iter()
                .map(|f| {
                    let root = find(&mut parent, node(*i, f.core()));
                    class_index[&root].degenerate(f.degeneracy)
                })
                .collect();
            levels[c.dim()][c.gen()].faces = faces;
            to_sd[c.dim()].push(val.inclusion.apply(*g));
        }
        let colimit = Arc::new(SimplicialSet::from_levels_unchecked(levels, self.sd.set().truncation()));
        let comparison = SimplicialMap::new_unchecked(colimit.clone(), self.sd.set().clone(), to_sd);
        // every member of a class must name the same simplex of Sd E
        for (i, val) in values.iter().enumerate() {
            for g in val.set.generators() {
                let c = class_index[&find(&mut parent, node(i, g))];
                if comparison.apply(c) != val.inclusion.apply(g) {
                    return Err(Error::ColimitMismatch(format!("class of {} is not a single simplex", val.set.label(g))));
                }
            }
        }
        if !comparison.is_isomorphism() || !comparison.is_valid() {
            return Err(Error::ColimitMismatch("colimit differs from the subdivision".into()));
        }
        Ok(CubeDiagram { objects, values, morphisms, colimit, comparison })
    }
}

/// The data of the star lemma for one face `α`.
#[derive(Clone, Debug)]
pub struct StarLemma {
    pub alpha: u32,
    pub est: Subcomplex,
    pub fiber: Subcomplex,
    /// `Sdf⁻¹(α) -> ESt(α)`.
    pub inclusion: SimplicialMap,
    /// `r: ESt(α) -> Sdf⁻¹(α)`.
    pub retraction: SimplicialMap,
    pub cylinder: TupleSet,
    /// `H: ESt(α) × Δ[1] -> ESt(α)`.
    pub homotopy: SimplicialMap,
    interval: Arc<SimplicialSet>,
}

/// Exact checks on the star lemma data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarCheck {
    pub maps_simplicial: bool,
    pub retraction_is_left_inverse: bool,
    /// `H(-, 0) = i ∘ r`.
    pub end_zero: bool,
    /// `H(-, 1) = id`.
    pub end_one: bool,
}

impl StarCheck {
    pub fn passed(&self) -> bool {
        self.maps_simplicial && self.retraction_is_left_inverse && self.end_zero && self.end_one
    }
}

impl StarLemma {
    /// `ESt(α) -> ESt(α) × Δ[1]` at the given end.
    pub fn end(&self, vertex: usize) -> SimplicialMap {
        let v = SimplexRef::generator(0, vertex);
        SimplicialMap::from_fn(self.est.set.clone(), self.cylinder.set().clone(), |g| {
            let c = self.interval.apply(v, &vec![0; g.dim() + 1]);
            self.cylinder.simplex(&[g, c]).expect("end lies in the cylinder")
        })
    }

    pub fn check(&self) -> StarCheck {
        let maps_simplicial = self.inclusion.is_valid() && self.retraction.is_valid() && self.homotopy.is_valid();
        let id_fiber = SimplicialMap::identity(self.fiber.set.clone());
        let retraction_is_left_inverse = self.inclusion.then(&self.retraction).agrees_with(&id_fiber);
        let ir = self.retraction.then(&self.inclusion);
        let end_zero = self.end(0).then(&self.homotopy).agrees_with(&ir);
        let end_one = self.end(1).then(&self.homotopy).agrees_with(&SimplicialMap::identity(self.est.set.clone()));
        StarCheck { maps_simplicial, retraction_is_left_inverse, end_zero, end_one }
    }
}

/// `St(α)` inside `Δ'[n]`.
pub fn star(n: usize, alpha: u32) -> Subcomplex {
    let delta = Arc::new(barycentric_delta(n));
    let d = delta.clone();
    full_subcomplex(&delta, move |g| match d.gen_label(g) {
        Label::Chain(c) => c.iter().all(|&m| m & alpha == alpha),
        _ => false,
    })
}

/// The `C_n`-shaped diagram of stars and its colimit.
#[derive(Clone, Debug)]
pub struct CubeDiagram {
    pub objects: Vec<u32>,
    pub values: Vec<Subcomplex>,
    /// `(σ, d_i σ)` pairs, by object index.
    pub morphisms: Vec<(usize, usize)>,
    pub colimit: Arc<SimplicialSet>,
    /// `colim -> Sd E`, an isomorphism.
    pub comparison: SimplicialMap,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::is_homology_iso;
    use crate::sset::{boundary, delta_simplex};

    #[test]
    fn barycentric_counts() {
        assert_eq!(barycentric_delta(0).counts(), vec![1]);
        assert_eq!(barycentric_delta(1).counts(), vec![3, 2]);
        assert_eq!(barycentric_delta(2).counts(), vec![7, 12, 6]);
        assert!(barycentric_delta(3).validate().is_empty());
    }

    #[test]
    fn sd_of_simplex_matches_barycentric() {
        for n in 0..=3 {
            let s = sd(Arc::new(standard_simplex(n)));
            assert_eq!(s.set().counts(), barycentric_delta(n).counts());
            assert!(s.set().validate().is_empty());
        }
    }

    #[test]
    fn sd_of_triangle_boundary_is_hexagon() {
        let x = Arc::new(boundary(2).unwrap());
        let s = sd(x);
        assert_eq!(s.set().counts(), vec![6, 6]);
        let lv = s.last_vertex();
        assert!(lv.is_valid());
        assert!(is_homology_iso(&lv, 1).is_iso());
    }

    #[test]
    fn sd_of_loop_handles_degenerate_faces() {
        let circle = Arc::new(crate::sset::polygon(1));
        let s = sd(circle);
        assert_eq!(s.set().counts(), vec![2, 2]);
        assert!(s.set().validate().is_empty());
        assert!(is_homology_iso(&s.last_vertex(), 1).is_iso());
    }

    #[test]
    fn identity_subdivides_to_identity() {
        let d2 = Arc::new(standard_simplex(2));
        let sf = sd_over_simplex(&SimplicialMap::identity(d2)).unwrap();
        assert!(sf.map.is_valid());
        assert!(sf.map.is_isomorphism());
    }

    #[test]
    fn star_of_vertex_has_four_vertices() {
        let st = star(2, 0b001);
        assert_eq!(st.set.count(0), 4);
        assert!(crate::homology::is_acyclic(&st.set, 2));
        assert_eq!(star(2, 0b111).set.counts(), vec![1]);
    }

    #[test]
    fn star_lemma_on_interval() {
        let d1 = Arc::new(standard_simplex(1));
        let sf = sd_over_simplex(&SimplicialMap::identity(d1)).unwrap();
        let lemma = sf.star_retraction(0b01).unwrap();
        assert_eq!(lemma.est.set.counts(), vec![2, 1]);
        assert!(lemma.check().passed());
    }

    #[test]
    fn star_lemma_on_collapse() {
        let d2 = Arc::new(standard_simplex(2));
        let d1 = Arc::new(standard_simplex(1));
        let (a, b) = (d2.clone(), d1.clone());
        let f = SimplicialMap::from_fn(d2, d1, move |x| {
            let v: Vec<usize> = delta_vertices(&a, x).iter().map(|&v| v.saturating_sub(1)).collect();
            delta_simplex(&b, &v)
        });
        assert!(f.is_valid());
        let sf = sd_over_simplex(&f).unwrap();
        for alpha in [0b01, 0b10, 0b11] {
            let lemma = sf.star_retraction(alpha).unwrap();
            assert!(lemma.check().passed(), "alpha {alpha:b}");
            assert!(is_homology_iso(&lemma.inclusion, 2).is_iso());
        }
    }

    #[test]
    fn cube_colimit_is_sd() {
        let d2 = Arc::new(standard_simplex(2));
        let sf = sd_over_simplex(&SimplicialMap::identity(d2)).unwrap();
        let cube = sf.cube_decomposition().unwrap();
        assert_eq!(cube.objects.len(), 7);
        assert_eq!(cube.colimit.counts(), vec![7, 12, 6]);
    }
}
