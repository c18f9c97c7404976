use std::collections::HashSet;
use std::sync::Arc;

use super::set::SimplicialSet;
use super::simplex::SimplexRef;
use crate::error::{Error, Result};

/// A simplicial map, given by the image of every nondegenerate generator.
#[derive(Clone, Debug)]
pub struct SimplicialMap {
    source: Arc<SimplicialSet>,
    target: Arc<SimplicialSet>,
    images: Vec<Vec<SimplexRef>>,
}

impl SimplicialMap {
    /// Builds a map and checks it commutes with every face operator.
    pub fn new(source: Arc<SimplicialSet>, target: Arc<SimplicialSet>, images: Vec<Vec<SimplexRef>>) -> Result<Self> {
        let map = Self::new_unchecked(source, target, images);
        if let Some(msg) = map.violations().into_iter().next() {
            return Err(Error::NotSimplicial(msg));
        }
        Ok(map)
    }

    pub fn new_unchecked(source: Arc<SimplicialSet>, target: Arc<SimplicialSet>, mut images: Vec<Vec<SimplexRef>>) -> Self {
        images.resize(source.max_dim() + 1, Vec::new());
        SimplicialMap { source, target, images }
    }

    /// Builds a map from a per-generator rule.
    pub fn from_fn(
        source: Arc<SimplicialSet>,
        target: Arc<SimplicialSet>,
        mut rule: impl FnMut(SimplexRef) -> SimplexRef,
    ) -> Self {
        let images = (0..=source.max_dim())
            .map(|d| (0..source.count(d)).map(|g| rule(SimplexRef::generator(d, g))).collect())
            .collect();
        SimplicialMap { source, target, images }
    }

    pub fn identity(set: Arc<SimplicialSet>) -> Self {
        Self::from_fn(set.clone(), set, |x| x)
    }

    /// The constant map onto (degeneracies of) a vertex.
    pub fn constant(source: Arc<SimplicialSet>, target: Arc<SimplicialSet>, vertex: SimplexRef) -> Self {
        Self::from_fn(source, target, |x| {
            (0..x.dim()).fold(vertex, |v, _| SimplexRef { dim: v.dim + 1, gen: v.gen, degeneracy: v.degeneracy.then(v.dim(), super::Degeneracy::elementary(0), v.dim() + 1) })
        })
    }

    pub fn source(&self) -> &Arc<SimplicialSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SimplicialSet> {
        &self.target
    }

    pub fn image_of_generator(&self, dim: usize, gen: usize) -> SimplexRef {
        self.images[dim][gen]
    }

    pub fn images(&self) -> &[Vec<SimplexRef>] {
        &self.images
    }

    /// Image of an arbitrary simplex of the source.
    pub fn apply(&self, x: SimplexRef) -> SimplexRef {
        self.images[x.gen_dim()][x.gen()].degenerate(x.degeneracy)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SimplicialMap) -> SimplicialMap {
        debug_assert!(Arc::ptr_eq(&self.target, &other.source) || *self.target == *other.source);
        let images = self.images.iter().map(|l| l.iter().map(|&y| other.apply(y)).collect()).collect();
        SimplicialMap { source: self.source.clone(), target: other.target.clone(), images }
    }

    /// Same map with a re-pointed source or target of identical shape.
    pub fn with_ends(&self, source: Arc<SimplicialSet>, target: Arc<SimplicialSet>) -> SimplicialMap {
        SimplicialMap { source, target, images: self.images.clone() }
    }

    /// Generator-level equality (same image for every generator).
    pub fn agrees_with(&self, other: &SimplicialMap) -> bool {
        let top = self.source.max_dim().max(other.source.max_dim());
        (0..=top).all(|d| self.images.get(d).map_or(&[][..], Vec::as_slice) == other.images.get(d).map_or(&[][..], Vec::as_slice))
    }

    /// Every generator whose image fails to commute with a face operator.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (d, level) in self.images.iter().enumerate() {
            for (g, &img) in level.iter().enumerate() {
                if img.dim() != d || !self.target.contains(img) {
                    out.push(format!("generator {}#{g} maps to invalid simplex {img}", d));
                    continue;
                }
                if d == 0 {
                    continue;
                }
                let gen = self.source.generator(d, g);
                for i in 0..=d {
                    let lhs = self.apply(gen.faces[i]);
                    let rhs = self.target.face(img, i);
                    if lhs != rhs {
                        out.push(format!(
                            "f(d{i} {}) = {} but d{i} f({}) = {}",
                            gen.label,
                            self.target.label(lhs),
                            gen.label,
                            self.target.label(rhs)
                        ));
                    }
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.violations().is_empty()
    }

    /// Injective on simplices: generators go to distinct nondegenerate generators.
    pub fn is_injective(&self) -> bool {
        let mut seen = HashSet::new();
        self.images.iter().flatten().all(|&y| !y.is_degenerate() && seen.insert(y))
    }

    /// Bijective on generators in every degree.
    pub fn is_isomorphism(&self) -> bool {
        self.is_injective()
            && (0..=self.target.max_dim().max(self.source.max_dim()))
                .all(|d| self.source.count(d) == self.target.count(d))
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Option<SimplicialMap> {
        if !self.is_isomorphism() {
            return None;
        }
        let mut images: Vec<Vec<SimplexRef>> =
            (0..=self.target.max_dim()).map(|d| vec![SimplexRef::generator(d, 0); self.target.count(d)]).collect();
        for (d, level) in self.images.iter().enumerate() {
            for (g, y) in level.iter().enumerate() {
                images[d][y.gen()] = SimplexRef::generator(d, g);
            }
        }
        Some(SimplicialMap { source: self.target.clone(), target: self.source.clone(), images })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::{boundary, standard_simplex};

    #[test]
    fn identity_is_valid_isomorphism() {
        let x = Arc::new(boundary(3).unwrap());
        let id = SimplicialMap::identity(x);
        assert!(id.is_valid());
        assert!(id.is_isomorphism());
        assert!(id.inverse().unwrap().agrees_with(&id));
    }

    #[test]
    fn broken_map_is_rejected() {
        let d1 = Arc::new(standard_simplex(1));
        // send both vertices to vertex 0 but keep the edge nondegenerate
        let images = vec![
            vec![SimplexRef::generator(0, 0), SimplexRef::generator(0, 0)],
            vec![SimplexRef::generator(1, 0)],
        ];
        assert!(SimplicialMap::new(d1.clone(), d1, images).is_err());
    }

    #[test]
    fn constant_map_is_simplicial() {
        let d2 = Arc::new(standard_simplex(2));
        let pt = Arc::new(SimplicialSet::point());
        let c = SimplicialMap::constant(d2, pt, SimplexRef::generator(0, 0));
        assert!(c.is_valid());
        assert_eq!(c.image_of_generator(2, 0).degeneracy.indices(), vec![1, 0]);
    }
}
