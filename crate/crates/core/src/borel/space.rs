use std::sync::Arc;

use crate::error::{Error, Result};
use crate::sset::{
    boundary, delta_simplex, delta_vertices, product, pushout, standard_simplex, SimplexRef, SimplicialMap,
    SimplicialSet, TupleSet,
};

/// Levels `X_0..X_N` with face and degeneracy maps.
#[derive(Clone, Debug)]
pub struct SimplicialSpace {
    pub levels: Vec<Arc<SimplicialSet>>,
    /// `faces[n][i]: X_n -> X_{n-1}`; `faces[0]` is empty.
    pub faces: Vec<Vec<SimplicialMap>>,
    /// `degeneracies[n][i]: X_n -> X_{n+1}`, for `n < top`.
    pub degeneracies: Vec<Vec<SimplicialMap>>,
}

impl SimplicialSpace {
    /// The constant simplicial space on `x`.
    pub fn constant(x: Arc<SimplicialSet>, top: usize) -> Self {
        let id = SimplicialMap::identity(x.clone());
        SimplicialSpace {
            levels: vec![x; top + 1],
            faces: (0..=top).map(|n| vec![id.clone(); if n == 0 { 0 } else { n + 1 }]).collect(),
            degeneracies: (0..top).map(|n| vec![id.clone(); n + 1]).collect(),
        }
    }

    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    /// Failures of the simplicial identities among the level maps.
    pub fn identity_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let (d, s) = (&self.faces, &self.degeneracies);
        for n in 2..=self.top() {
            for j in 0..=n {
                for i in 0..j {
                    // d_i d_j = d_{j-1} d_i
                    if !d[n][j].then(&d[n - 1][i]).agrees_with(&d[n][i].then(&d[n - 1][j - 1])) {
                        out.push(format!("d{i} d{j} != d{} d{i} on level {n}", j - 1));
                    }
                }
            }
        }
        for n in 0..self.top().saturating_sub(1) {
            for j in 0..=n {
                for i in 0..=j {
                    // s_i s_j = s_{j+1} s_i
                    if !s[n][j].then(&s[n + 1][i]).agrees_with(&s[n][i].then(&s[n + 1][j + 1])) {
                        out.push(format!("s{i} s{j} != s{} s{i} on level {n}", j + 1));
                    }
                }
            }
        }
        for n in 0..self.top() {
            let id = SimplicialMap::identity(self.levels[n].clone());
            for j in 0..=n {
                for i in 0..=n + 1 {
                    let lhs = s[n][j].then(&d[n + 1][i]);
                    let ok = if i < j {
                        lhs.agrees_with(&d[n][i].then(&s[n - 1][j - 1]))
                    } else if i == j || i == j + 1 {
                        lhs.agrees_with(&id)
                    } else {
                        lhs.agrees_with(&d[n][i - 1].then(&s[n - 1][j]))
                    };
                    if !ok {
                        out.push(format!("d{i} s{j} identity fails on level {n}"));
                    }
                }
            }
        }
        out
    }
}

/// Segal's thick realization, truncated at `bound`, with its filtration.
#[derive(Clone, Debug)]
pub struct Realization {
    pub set: Arc<SimplicialSet>,
    pub bound: usize,
    /// `‖X‖_n` as built, before stamping the final truncation.
    pub stages: Vec<Arc<SimplicialSet>>,
    /// `Δ[n] × X_n`.
    pub cells: Vec<TupleSet>,
    /// `Δ[n] × X_n -> ‖X‖`.
    pub characteristic: Vec<SimplicialMap>,
    /// For every generator of `set`: the cell it was attached from.
    origin: Vec<Vec<(usize, SimplexRef)>>,
}

impl Realization {
    /// Inclusion of `‖X‖_n` into the whole realization.
    pub fn stage_inclusion(&self, n: usize) -> SimplicialMap {
        let stage = &self.stages[n];
        SimplicialMap::from_fn(stage.clone(), self.set.clone(), |g| g)
    }

    /// `(n, simplex of Δ[n] × X_n)` a generator comes from.
    pub fn origin(&self, g: SimplexRef) -> (usize, SimplexRef) {
        self.origin[g.dim()][g.gen()]
    }

    /// The image of `(θ, x)` for `θ` a simplex of `Δ[n]` and `x` of `X_n`.
    pub fn point(&self, n: usize, theta: SimplexRef, x: SimplexRef) -> Option<SimplexRef> {
        self.cells[n].simplex(&[theta, x]).map(|c| self.characteristic[n].apply(c))
    }
}

/// `‖X‖_N`: iterated pushouts of `∂Δ[n] × X_n ↪ Δ[n] × X_n` along face maps.
pub fn thick_realize(x: &SimplicialSpace, bound: usize) -> Result<Realization> {
    let top = x.top().min(bound);
    let point = Arc::new(standard_simplex(0));
    let cell0 = product(point, x.levels[0].clone(), bound);
    let mut current = cell0.set().clone();
    let mut stages = vec![current.clone()];
    let mut characteristic = vec![SimplicialMap::identity(current.clone())];
    let mut cells = vec![cell0];
    let mut origin: Vec<Vec<(usize, SimplexRef)>> =
        (0..=current.max_dim()).map(|d| (0..current.count(d)).map(|g| (0, SimplexRef::generator(d, g))).collect()).collect();
    for n in 1..=top {
        let delta = Arc::new(standard_simplex(n));
        let bd = Arc::new(boundary(n)?);
        let cell = product(delta.clone(), x.levels[n].clone(), bound);
        let bd_cell = product(bd.clone(), x.levels[n].clone(), bound);
        let bd_in = SimplicialMap::from_fn(bd.clone(), delta.clone(), |t| {
            delta.find(bd.gen_label(t)).expect("faces of the boundary lie in the simplex")
        });
        let i = cell.lift(&[bd_cell.projection(0).then(&bd_in), bd_cell.projection(1)])?;
        let lower = &cells[n - 1];
        let lower_delta = lower.factors()[0].clone();
        let j = SimplicialMap::from_fn(bd_cell.set().clone(), current.clone(), |g| {
            let parts = bd_cell.parts(g);
            let verts = delta_vertices(&delta, bd_in.apply(parts[0]));
            let missing = (0..=n).find(|v| !verts.contains(v)).expect("boundary simplices miss a vertex");
            let squeezed: Vec<usize> = verts.iter().map(|&v| if v > missing { v - 1 } else { v }).collect();
            let theta = delta_simplex(&lower_delta, &squeezed);
            let face = x.faces[n][missing].apply(parts[1]);
            let c = lower.simplex(&[theta, face]).expect("face lands in the previous cell");
            characteristic[n - 1].apply(c)
        });
        let po = pushout(&i, &j, bound)?;
        for c in &mut characteristic {
            *c = c.then(&po.from_y);
        }
        characteristic.push(po.from_x.clone());
        let set = po.set.clone();
        for d in 0..=set.max_dim() {
            if origin.len() <= d {
                origin.push(Vec::new());
            }
            origin[d].resize(set.count(d), (usize::MAX, SimplexRef::generator(0, 0)));
        }
        for c in cell.set().generators() {
            let img = po.from_x.apply(c);
            if !img.is_degenerate() && origin[img.dim()][img.gen()].0 == usize::MAX {
                origin[img.dim()][img.gen()] = (n, c);
            }
        }
        current = set;
        stages.push(current.clone());
        cells.push(cell);
    }
    let truncation = Some(bound.min(x.top() + 1));
    let set = Arc::new((*current).clone().with_truncation(truncation));
    let characteristic = characteristic.into_iter().map(|c| c.with_ends(c.source().clone(), set.clone())).collect();
    if origin.iter().flatten().any(|o| o.0 == usize::MAX) {
        return Err(Error::Malformed("realization generator without an originating cell".into()));
    }
    Ok(Realization { set, bound, stages, cells, characteristic, origin })
}

/// `‖p‖: ‖E‖ -> ‖B‖` for a levelwise map commuting with the faces.
pub fn realize_map(e: &Realization, b: &Realization, levels: &[SimplicialMap]) -> Result<SimplicialMap> {
    let mut bad = None;
    let map = SimplicialMap::from_fn(e.set.clone(), b.set.clone(), |g| {
        let (n, c) = e.origin(g);
        let parts = e.cells[n].parts(c);
        match b.point(n, parts[0], levels[n].apply(parts[1])) {
            Some(s) => s,
            None => {
                bad = Some(g);
                g
            }
        }
    });
    match bad {
        Some(g) => Err(Error::NotSimplicial(format!("no image for {}", e.set.label(g)))),
        None => Ok(map),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::homology;

    fn fat_point(n: usize) -> Realization {
        let s = SimplicialSpace::constant(Arc::new(SimplicialSet::point()), n);
        assert!(s.identity_violations().is_empty());
        thick_realize(&s, n).unwrap()
    }

    #[test]
    fn fat_point_stage_one_is_a_circle() {
        let r = fat_point(1);
        assert_eq!(r.stages[1].counts(), vec![1, 1]);
        assert_eq!(homology(&r.stages[1], 1).free_rank, 1);
    }

    #[test]
    fn fat_point_stage_two_kills_the_loop() {
        let r = fat_point(2);
        assert_eq!(r.set.counts(), vec![1, 1, 1]);
        assert_eq!(homology(&r.set, 0).free_rank, 1);
        assert!(homology(&r.set, 1).is_zero());
    }
}
