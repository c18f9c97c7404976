//! Eilenberg–Zilber normal forms.
//!
//! Every simplex of a simplicial set is written uniquely as
//! `s_{i_1} s_{i_2} ... s_{i_k} x` with `i_1 > i_2 > ... > i_k` and `x`
//! nondegenerate. Such a word is the same thing as an order-preserving
//! surjection `[n] -> [m]`; we store it as the set of positions `t` where the
//! surjection repeats (`eta(t) == eta(t + 1)`), packed into a bitmask. The
//! repeat set of `s_{i_1} ... s_{i_k}` is exactly `{i_1, ..., i_k}`.

use std::fmt;

use crate::error::Error;

/// Largest simplex dimension representable by a [`Degeneracy`] mask.
pub const MAX_DIM: usize = 31;

/// A degeneracy word in canonical strictly-decreasing form.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Degeneracy(u32);

impl Degeneracy {
    pub const IDENTITY: Degeneracy = Degeneracy(0);

    pub fn from_mask(mask: u32) -> Self {
        Degeneracy(mask)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn is_identity(self) -> bool {
        self.0 == 0
    }

    /// Number of degeneracy operators in the word.
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// The word as indices `i_1 > i_2 > ... > i_k`.
    pub fn indices(self) -> Vec<usize> {
        (0..32).rev().filter(|&i| self.0 & (1 << i) != 0).collect()
    }

    /// Builds a degeneracy from a word that is already in normal form.
    pub fn from_indices(indices: &[usize]) -> Result<Self, Error> {
        if indices.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::NotNormalForm(indices.to_vec()));
        }
        let mut mask = 0u32;
        for &i in indices {
            if i >= MAX_DIM {
                return Err(Error::DimensionTooLarge(i));
            }
            mask |= 1 << i;
        }
        Ok(Degeneracy(mask))
    }

    /// Normalizes an arbitrary word `s_{a_1} ... s_{a_k}` (rightmost applied
    /// first) acting on a simplex of dimension `base_dim`.
    pub fn normalize_word(word: &[usize], base_dim: usize) -> Result<Self, Error> {
        let mut dim = base_dim;
        let mut current = Degeneracy::IDENTITY;
        for &i in word.iter().rev() {
            if i > dim {
                return Err(Error::OperatorOutOfRange { index: i, dim });
            }
            if dim + 1 > MAX_DIM {
                return Err(Error::DimensionTooLarge(dim + 1));
            }
            current = current.then(dim, Degeneracy::elementary(i), dim + 1);
            dim += 1;
        }
        Ok(current)
    }

    /// The single operator `s_i`.
    pub fn elementary(i: usize) -> Self {
        Degeneracy(1 << i)
    }

    /// Values of the surjection `[dim] -> [dim - len]`.
    pub fn surjection(self, dim: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(dim + 1);
        let mut v = 0;
        for t in 0..=dim {
            out.push(v);
            if t < dim && self.0 & (1 << t) == 0 {
                v += 1;
            }
        }
        out
    }

    /// Reads off the repeat set of a nondecreasing surjective value list.
    pub fn from_surjection(values: &[usize]) -> Self {
        let mut mask = 0u32;
        for t in 0..values.len().saturating_sub(1) {
            if values[t] == values[t + 1] {
                mask |= 1 << t;
            }
        }
        Degeneracy(mask)
    }

    /// Composite `self ∘ eps` where `self: [n] -> [m]` and `eps: [k] -> [n]`.
    /// In simplex terms: applying the degeneracy `eps` to `self · x`.
    pub fn then(self, n: usize, eps: Degeneracy, k: usize) -> Degeneracy {
        if eps.is_identity() {
            return self;
        }
        if self.is_identity() {
            return eps;
        }
        debug_assert_eq!(k - eps.len(), n);
        let mut mask = 0u32;
        let mut e = 0usize;
        for t in 0..k {
            let repeat = if eps.0 & (1 << t) != 0 {
                true
            } else {
                // eps(t + 1) = eps(t) + 1: repeats under self iff eps(t) is a
                // repeat position of self.
                let r = self.0 & (1 << e) != 0;
                e += 1;
                r
            };
            if repeat {
                mask |= 1 << t;
            }
        }
        Degeneracy(mask)
    }
}

impl fmt::Display for Degeneracy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in self.indices() {
            write!(f, "s{i} ")?;
        }
        Ok(())
    }
}

/// A simplex in normal form: a nondegenerate generator with a degeneracy word.
///
/// `gen` indexes the generator inside its degree, which is
/// `dim - degeneracy.len()`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimplexRef {
    pub dim: u8,
    pub gen: u32,
    pub degeneracy: Degeneracy,
}

impl SimplexRef {
    pub fn generator(dim: usize, gen: usize) -> Self {
        SimplexRef { dim: dim as u8, gen: gen as u32, degeneracy: Degeneracy::IDENTITY }
    }

    pub fn dim(self) -> usize {
        self.dim as usize
    }

    pub fn gen(self) -> usize {
        self.gen as usize
    }

    /// Dimension of the underlying nondegenerate generator.
    pub fn gen_dim(self) -> usize {
        self.dim as usize - self.degeneracy.len()
    }

    pub fn is_degenerate(self) -> bool {
        !self.degeneracy.is_identity()
    }

    /// The nondegenerate core of this simplex.
    pub fn core(self) -> SimplexRef {
        SimplexRef::generator(self.gen_dim(), self.gen())
    }

    /// Applies a further degeneracy `eps: [k] -> [dim]` (k = dim + eps.len()).
    pub fn degenerate(self, eps: Degeneracy) -> SimplexRef {
        let k = self.dim() + eps.len();
        SimplexRef {
            dim: k as u8,
            gen: self.gen,
            degeneracy: self.degeneracy.then(self.dim(), eps, k),
        }
    }
}

impl fmt::Display for SimplexRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}[{}]", self.degeneracy, self.gen, self.gen_dim())
    }
}

/// An order-preserving map `[k] -> [n]` given by its values.
pub type OrderMap = Vec<usize>;

/// Coface `delta_i: [n-1] -> [n]`, skipping `i`.
pub fn coface(n: usize, i: usize) -> OrderMap {
    (0..n).map(|t| if t < i { t } else { t + 1 }).collect()
}

/// Codegeneracy `sigma_i: [n+1] -> [n]`, hitting `i` twice.
pub fn codegeneracy(n: usize, i: usize) -> OrderMap {
    (0..=n + 1).map(|t| if t <= i { t } else { t - 1 }).collect()
}

/// Epi-mono factorization of a nondecreasing value list: the repeat set of the
/// surjective part and the sorted image.
pub fn factor(values: &[usize]) -> (Degeneracy, Vec<usize>) {
    let mut image: Vec<usize> = Vec::with_capacity(values.len());
    let mut mask = 0u32;
    for (t, &v) in values.iter().enumerate() {
        if t > 0 && values[t - 1] == v {
            mask |= 1 << (t - 1);
        } else {
            image.push(v);
        }
    }
    (Degeneracy(mask), image)
}

/// All order-preserving maps `[k] -> [n]`, in lexicographic order.
pub fn order_maps(k: usize, n: usize) -> Vec<OrderMap> {
    fn rec(pos: usize, lo: usize, cur: &mut Vec<usize>, k: usize, n: usize, out: &mut Vec<OrderMap>) {
        if pos > k {
            out.push(cur.clone());
            return;
        }
        for v in lo..=n {
            cur.push(v);
            rec(pos + 1, v, cur, k, n, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, 0, &mut Vec::with_capacity(k + 1), k, n, &mut out);
    out
}

/// All degeneracies `[k] -> [m]` (bitmasks over `k` positions with
/// `k - m` bits set), in increasing mask order.
pub fn degeneracies(k: usize, m: usize) -> Vec<Degeneracy> {
    if m > k {
        return Vec::new();
    }
    let need = (k - m) as u32;
    if k == 0 {
        return vec![Degeneracy::IDENTITY];
    }
    (0u32..(1u32 << k))
        .filter(|mask| mask.count_ones() == need)
        .map(Degeneracy)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s0_s0_normalizes_to_s1_s0() {
        let d = Degeneracy::normalize_word(&[0, 0], 0).unwrap();
        assert_eq!(d.indices(), vec![1, 0]);
    }

    #[test]
    fn normalization_is_idempotent() {
        let d = Degeneracy::normalize_word(&[0, 2, 1, 0], 2).unwrap();
        let again = Degeneracy::normalize_word(&d.indices(), 2).unwrap();
        assert_eq!(d, again);
        assert_eq!(Degeneracy::from_indices(&d.indices()).unwrap(), d);
    }

    #[test]
    fn surjection_round_trip() {
        // s2 s0 on a 1-simplex: 0,0,1,1
        let d = Degeneracy::from_indices(&[2, 0]).unwrap();
        assert_eq!(d.surjection(3), vec![0, 0, 1, 1]);
        assert_eq!(Degeneracy::from_surjection(&[0, 0, 1, 1]), d);
    }

    #[test]
    fn rejects_non_canonical_word() {
        assert!(Degeneracy::from_indices(&[0, 1]).is_err());
        assert!(Degeneracy::normalize_word(&[3], 1).is_err());
    }

    #[test]
    fn factor_splits_epi_and_mono() {
        let (eps, image) = factor(&[0, 0, 2, 3, 3]);
        assert_eq!(image, vec![0, 2, 3]);
        assert_eq!(eps.indices(), vec![3, 0]);
    }

    #[test]
    fn order_map_counts() {
        // C(k + n + 1, k + 1)
        assert_eq!(order_maps(1, 1).len(), 3);
        assert_eq!(order_maps(2, 2).len(), 10);
        assert_eq!(degeneracies(3, 1).len(), 3);
    }
}
