use num_bigint::BigInt;
use num_traits::Zero;

use super::snf::SparseVec;
use crate::sset::SimplicialSet;

/// Normalized chains: degree `k` is free on the nondegenerate `k`-generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    pub dims: Vec<usize>,
    /// `boundaries[k]` is `∂_k` as sparse rows over the degree `k - 1` basis;
    /// `boundaries[0]` has no rows.
    pub boundaries: Vec<Vec<SparseVec<BigInt>>>,
}

impl ChainComplex {
    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dim(&self, k: usize) -> usize {
        self.dims.get(k).copied().unwrap_or(0)
    }

    /// `∂_k` as sparse rows; zero outside the stored range.
    pub fn boundary_rows(&self, k: usize) -> Vec<SparseVec<BigInt>> {
        if k == 0 {
            return Vec::new();
        }
        match self.boundaries.get(k) {
            Some(rows) => rows.clone(),
            None => vec![Vec::new(); self.dim(k - 1)],
        }
    }

    /// `∂_k` as a dense matrix (rows: degree `k - 1`, columns: degree `k`).
    pub fn boundary_dense(&self, k: usize) -> Vec<Vec<BigInt>> {
        let rows = self.boundary_rows(k);
        let cols = self.dim(k);
        rows.iter()
            .map(|r| {
                let mut out = vec![BigInt::zero(); cols];
                for (c, v) in r {
                    out[*c] = v.clone();
                }
                out
            })
            .collect()
    }

    /// Whether `∂_{k} ∂_{k+1} = 0` for every `k`.
    pub fn is_complex(&self) -> bool {
        (1..self.top()).all(|k| {
            let a = self.boundary_dense(k);
            let b = self.boundary_dense(k + 1);
            a.iter().all(|row| {
                (0..self.dim(k + 1)).all(|j| {
                    row.iter().enumerate().map(|(l, x)| x * &b[l][j]).sum::<BigInt>().is_zero()
                })
            })
        })
    }
}

pub fn normalized_chains(x: &SimplicialSet) -> ChainComplex {
    let top = x.max_dim();
    let dims: Vec<usize> = (0..=top).map(|k| x.count(k)).collect();
    let mut boundaries = vec![Vec::new()];
    for k in 1..=top {
        let mut rows: Vec<SparseVec<BigInt>> = vec![Vec::new(); dims[k - 1]];
        for (g, gen) in x.level(k).iter().enumerate() {
            for (i, f) in gen.faces.iter().enumerate() {
                if f.is_degenerate() {
                    continue;
                }
                let sign = if i % 2 == 0 { 1 } else { -1 };
                rows[f.gen()].push((g, BigInt::from(sign)));
            }
        }
        for row in &mut rows {
            row.sort_by_key(|(c, _)| *c);
            let mut merged: SparseVec<BigInt> = Vec::with_capacity(row.len());
            for (c, v) in row.drain(..) {
                match merged.last_mut() {
                    Some((lc, lv)) if *lc == c => *lv += v,
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|(_, v)| !v.is_zero());
            *row = merged;
        }
        boundaries.push(rows);
    }
    ChainComplex { dims, boundaries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::{boundary, standard_simplex};

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn interval_boundary_is_minus_one_one() {
        let c = normalized_chains(&standard_simplex(1));
        assert_eq!(c.boundary_dense(1), vec![ints(&[-1]), ints(&[1])]);
    }

    #[test]
    fn triangle_boundary_columns_have_two_entries() {
        let c = normalized_chains(&boundary(2).unwrap());
        let m = c.boundary_dense(1);
        assert_eq!(m.len(), 3);
        for j in 0..3 {
            let col: Vec<&BigInt> = m.iter().map(|r| &r[j]).filter(|v| !v.is_zero()).collect();
            assert_eq!(col.len(), 2);
        }
    }

    #[test]
    fn boundary_squares_to_zero() {
        assert!(normalized_chains(&standard_simplex(4)).is_complex());
    }
}
