//! Sparse Smith normal form with optional tracking of the unimodular
//! transforms, over the integers or a prime field.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arithmetic for a Euclidean ring, supplied as a value so that runtime
/// moduli are possible.
pub trait Ring: Sync + Send + Clone + Debug {
    type E: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn is_unit(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E {
        self.add(a, &self.neg(b))
    }
    /// Euclidean size, for pivot choice.
    fn cmp_size(&self, a: &Self::E, b: &Self::E) -> Ordering;
    /// Quotient leaving the smallest remainder.
    fn quot(&self, a: &Self::E, d: &Self::E) -> Self::E;
    /// `(g, s, t)` with `s a + t b = g`.
    fn gcdext(&self, a: &Self::E, b: &Self::E) -> (Self::E, Self::E, Self::E);
    fn div_exact(&self, a: &Self::E, d: &Self::E) -> Self::E;
    /// Unit `u` such that `u a` is the canonical associate of `a`.
    fn canon_unit(&self, a: &Self::E) -> Self::E;
    fn inv_unit(&self, u: &Self::E) -> Self::E;
    fn divides(&self, a: &Self::E, b: &Self::E) -> bool;
    fn from_bigint(&self, v: &BigInt) -> Self::E;
    fn to_bigint(&self, a: &Self::E) -> BigInt;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Integers;

impl Ring for Integers {
    type E = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn is_unit(&self, a: &BigInt) -> bool {
        a.magnitude().is_one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn cmp_size(&self, a: &BigInt, b: &BigInt) -> Ordering {
        a.magnitude().cmp(b.magnitude())
    }
    fn quot(&self, a: &BigInt, d: &BigInt) -> BigInt {
        let q = a.div_floor(d);
        let r = a - &q * d;
        // floor leaves 0 <= r < |d| (sign of d); step once if the other side is closer
        let twice: BigInt = &r * 2;
        if twice.magnitude() > d.magnitude() {
            q + 1
        } else {
            q
        }
    }
    fn gcdext(&self, a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
        let e = a.extended_gcd(b);
        if e.gcd.is_negative() {
            (-e.gcd, -e.x, -e.y)
        } else {
            (e.gcd, e.x, e.y)
        }
    }
    fn div_exact(&self, a: &BigInt, d: &BigInt) -> BigInt {
        a / d
    }
    fn canon_unit(&self, a: &BigInt) -> BigInt {
        if a.is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        }
    }
    fn inv_unit(&self, u: &BigInt) -> BigInt {
        u.clone()
    }
    fn divides(&self, a: &BigInt, b: &BigInt) -> bool {
        if a.is_zero() {
            b.is_zero()
        } else {
            (b % a).is_zero()
        }
    }
    fn from_bigint(&self, v: &BigInt) -> BigInt {
        v.clone()
    }
    fn to_bigint(&self, a: &BigInt) -> BigInt {
        a.clone()
    }
}

/// The field `Z/p` for a prime `p`.
#[derive(Clone, Copy, Debug)]
pub struct PrimeField(pub u64);

impl PrimeField {
    fn pow(&self, b: u64, mut e: u64) -> u64 {
        let p = self.0 as u128;
        let mut acc: u128 = 1;
        let mut base = b as u128 % p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc as u64
    }
}

impl Ring for PrimeField {
    type E = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.0
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn is_unit(&self, a: &u64) -> bool {
        *a != 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.0 as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.0 as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.0 - a
        }
    }
    fn cmp_size(&self, a: &u64, b: &u64) -> Ordering {
        (*a != 0).cmp(&(*b != 0))
    }
    fn quot(&self, a: &u64, d: &u64) -> u64 {
        self.mul(a, &self.inv_unit(d))
    }
    fn gcdext(&self, a: &u64, b: &u64) -> (u64, u64, u64) {
        if *a != 0 {
            (1, self.inv_unit(a), 0)
        } else if *b != 0 {
            (1, 0, self.inv_unit(b))
        } else {
            (0, 1, 0)
        }
    }
    fn div_exact(&self, a: &u64, d: &u64) -> u64 {
        self.quot(a, d)
    }
    fn canon_unit(&self, a: &u64) -> u64 {
        if *a == 0 {
            1
        } else {
            self.inv_unit(a)
        }
    }
    fn inv_unit(&self, u: &u64) -> u64 {
        self.pow(*u, self.0 - 2)
    }
    fn divides(&self, a: &u64, b: &u64) -> bool {
        *a != 0 || *b == 0
    }
    fn from_bigint(&self, v: &BigInt) -> u64 {
        v.mod_floor(&BigInt::from(self.0)).to_u64().expect("reduced residue fits")
    }
    fn to_bigint(&self, a: &u64) -> BigInt {
        BigInt::from(*a)
    }
}

/// Sparse vector sorted by index.
pub type SparseVec<E> = Vec<(usize, E)>;

/// `y + q x`.
pub fn axpy<R: Ring>(ring: &R, y: &SparseVec<R::E>, q: &R::E, x: &SparseVec<R::E>) -> SparseVec<R::E> {
    combine(ring, &ring.one(), y, q, x)
}

/// `a y + b x`.
pub fn combine<R: Ring>(ring: &R, a: &R::E, y: &SparseVec<R::E>, b: &R::E, x: &SparseVec<R::E>) -> SparseVec<R::E> {
    let mut out = Vec::with_capacity(y.len() + x.len());
    let (mut i, mut j) = (0, 0);
    let a_one = ring.is_unit(a) && *a == ring.one();
    let scale_a = |v: &R::E| if a_one { v.clone() } else { ring.mul(a, v) };
    while i < y.len() || j < x.len() {
        let (idx, v) = match (y.get(i), x.get(j)) {
            (Some((iy, vy)), Some((ix, vx))) if iy == ix => {
                i += 1;
                j += 1;
                (*iy, ring.add(&scale_a(vy), &ring.mul(b, vx)))
            }
            (Some((iy, vy)), Some((ix, _))) if iy < ix => {
                i += 1;
                (*iy, scale_a(vy))
            }
            (Some((iy, vy)), None) => {
                i += 1;
                (*iy, scale_a(vy))
            }
            (_, Some((ix, vx))) => {
                j += 1;
                (*ix, ring.mul(b, vx))
            }
            (None, None) => unreachable!(),
        };
        if !ring.is_zero(&v) {
            out.push((idx, v));
        }
    }
    out
}

pub fn scale<R: Ring>(ring: &R, u: &R::E, x: &SparseVec<R::E>) -> SparseVec<R::E> {
    x.iter().map(|(i, v)| (*i, ring.mul(u, v))).filter(|(_, v)| !ring.is_zero(v)).collect()
}

pub fn get<'a, E>(v: &'a SparseVec<E>, idx: usize) -> Option<&'a E> {
    v.binary_search_by_key(&idx, |(i, _)| *i).ok().map(|p| &v[p].1)
}

/// Dot product of two sparse vectors.
pub fn dot<R: Ring>(ring: &R, a: &SparseVec<R::E>, b: &SparseVec<R::E>) -> R::E {
    let (mut i, mut j) = (0, 0);
    let mut acc = ring.zero();
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                acc = ring.add(&acc, &ring.mul(&a[i].1, &b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

fn identity_family<R: Ring>(ring: &R, n: usize) -> Vec<SparseVec<R::E>> {
    (0..n).map(|i| vec![(i, ring.one())]).collect()
}

/// Which unimodular transforms to record.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tracking {
    pub left: bool,
    pub right: bool,
}

impl Tracking {
    pub const NONE: Tracking = Tracking { left: false, right: false };
    pub const LEFT: Tracking = Tracking { left: true, right: false };
    pub const RIGHT: Tracking = Tracking { left: false, right: true };
    pub const BOTH: Tracking = Tracking { left: true, right: true };
}

/// Result of a Smith normal form computation: `U A V = D` where `D` is zero
/// except at `pivots[t]`, which holds `diag[t]`, and
/// `diag[0] | diag[1] | ...`.
#[derive(Clone, Debug)]
pub struct Snf<R: Ring> {
    pub rows: usize,
    pub cols: usize,
    pub pivots: Vec<(usize, usize)>,
    pub diag: Vec<R::E>,
    /// Rows of `U`.
    pub u_rows: Option<Vec<SparseVec<R::E>>>,
    /// Columns of `U^{-1}`.
    pub u_inv_cols: Option<Vec<SparseVec<R::E>>>,
    /// Columns of `V`.
    pub v_cols: Option<Vec<SparseVec<R::E>>>,
    /// Rows of `V^{-1}`.
    pub v_inv_rows: Option<Vec<SparseVec<R::E>>>,
}

impl<R: Ring> Snf<R> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Column indices that carry no pivot; the matching columns of `V` span
    /// the kernel.
    pub fn free_cols(&self) -> Vec<usize> {
        let used: BTreeSet<usize> = self.pivots.iter().map(|p| p.1).collect();
        (0..self.cols).filter(|c| !used.contains(c)).collect()
    }

    pub fn free_rows(&self) -> Vec<usize> {
        let used: BTreeSet<usize> = self.pivots.iter().map(|p| p.0).collect();
        (0..self.rows).filter(|r| !used.contains(r)).collect()
    }
}

struct Work<'r, R: Ring> {
    ring: &'r R,
    rows: Vec<SparseVec<R::E>>,
    col_pat: Vec<BTreeSet<usize>>,
    u_rows: Option<Vec<SparseVec<R::E>>>,
    u_inv_cols: Option<Vec<SparseVec<R::E>>>,
    v_cols: Option<Vec<SparseVec<R::E>>>,
    v_inv_rows: Option<Vec<SparseVec<R::E>>>,
}

impl<R: Ring> Work<'_, R> {
    fn entry(&self, i: usize, j: usize) -> R::E {
        get(&self.rows[i], j).cloned().unwrap_or_else(|| self.ring.zero())
    }

    fn set_row(&mut self, i: usize, new: SparseVec<R::E>) {
        let old = std::mem::take(&mut self.rows[i]);
        let (mut a, mut b) = (0, 0);
        while a < old.len() || b < new.len() {
            match (old.get(a), new.get(b)) {
                (Some((x, _)), Some((y, _))) if x == y => {
                    a += 1;
                    b += 1;
                }
                (Some((x, _)), Some((y, _))) if x < y => {
                    self.col_pat[*x].remove(&i);
                    a += 1;
                }
                (Some((x, _)), None) => {
                    self.col_pat[*x].remove(&i);
                    a += 1;
                }
                (_, Some((y, _))) => {
                    self.col_pat[*y].insert(i);
                    b += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        self.rows[i] = new;
    }

    fn set_entry(&mut self, i: usize, j: usize, v: R::E) {
        let row = &mut self.rows[i];
        match row.binary_search_by_key(&j, |(c, _)| *c) {
            Ok(p) => {
                if self.ring.is_zero(&v) {
                    row.remove(p);
                    self.col_pat[j].remove(&i);
                } else {
                    row[p].1 = v;
                }
            }
            Err(p) => {
                if !self.ring.is_zero(&v) {
                    row.insert(p, (j, v));
                    self.col_pat[j].insert(i);
                }
            }
        }
    }

    /// row `dst` += q row `src`
    fn row_axpy(&mut self, dst: usize, q: &R::E, src: usize) {
        let ring = self.ring;
        let new = axpy(ring, &self.rows[dst], q, &self.rows[src]);
        self.set_row(dst, new);
        if let Some(u) = &mut self.u_rows {
            u[dst] = axpy(ring, &u[dst], q, &u[src]);
        }
        if let Some(ui) = &mut self.u_inv_cols {
            ui[src] = axpy(ring, &ui[src], &ring.neg(q), &ui[dst]);
        }
    }

    /// col `dst` += q col `src`
    fn col_axpy(&mut self, dst: usize, q: &R::E, src: usize) {
        let ring = self.ring;
        let rows: Vec<usize> = self.col_pat[src].iter().copied().collect();
        for i in rows {
            let v = ring.add(&self.entry(i, dst), &ring.mul(q, &self.entry(i, src)));
            self.set_entry(i, dst, v);
        }
        if let Some(v) = &mut self.v_cols {
            v[dst] = axpy(ring, &v[dst], q, &v[src]);
        }
        if let Some(vi) = &mut self.v_inv_rows {
            vi[src] = axpy(ring, &vi[src], &ring.neg(q), &vi[dst]);
        }
    }

    /// rows `(a, b)` <- `[[p, q], [r, s]] (a, b)`, determinant 1
    fn row_pair(&mut self, a: usize, b: usize, m: [&R::E; 4]) {
        let ring = self.ring;
        let [p, q, r, s] = m;
        let na = combine(ring, p, &self.rows[a], q, &self.rows[b]);
        let nb = combine(ring, r, &self.rows[a], s, &self.rows[b]);
        self.set_row(a, na);
        self.set_row(b, nb);
        if let Some(u) = &mut self.u_rows {
            let na = combine(ring, p, &u[a], q, &u[b]);
            let nb = combine(ring, r, &u[a], s, &u[b]);
            u[a] = na;
            u[b] = nb;
        }
        if let Some(ui) = &mut self.u_inv_cols {
            // inverse is [[s, -q], [-r, p]]; columns transform by it on the right
            let na = combine(ring, s, &ui[a], &ring.neg(r), &ui[b]);
            let nb = combine(ring, &ring.neg(q), &ui[a], p, &ui[b]);
            ui[a] = na;
            ui[b] = nb;
        }
    }

    /// cols `(a, b)` <- `(a, b) [[p, q], [r, s]]`, determinant 1
    fn col_pair(&mut self, a: usize, b: usize, m: [&R::E; 4]) {
        let ring = self.ring;
        let [p, q, r, s] = m;
        let rows: BTreeSet<usize> = self.col_pat[a].union(&self.col_pat[b]).copied().collect();
        for i in rows {
            let (x, y) = (self.entry(i, a), self.entry(i, b));
            let nx = ring.add(&ring.mul(p, &x), &ring.mul(r, &y));
            let ny = ring.add(&ring.mul(q, &x), &ring.mul(s, &y));
            self.set_entry(i, a, nx);
            self.set_entry(i, b, ny);
        }
        if let Some(v) = &mut self.v_cols {
            let na = combine(ring, p, &v[a], r, &v[b]);
            let nb = combine(ring, q, &v[a], s, &v[b]);
            v[a] = na;
            v[b] = nb;
        }
        if let Some(vi) = &mut self.v_inv_rows {
            let na = combine(ring, s, &vi[a], &ring.neg(q), &vi[b]);
            let nb = combine(ring, &ring.neg(r), &vi[a], p, &vi[b]);
            vi[a] = na;
            vi[b] = nb;
        }
    }

    fn scale_row(&mut self, i: usize, u: &R::E) {
        let ring = self.ring;
        let new = scale(ring, u, &self.rows[i]);
        self.set_row(i, new);
        if let Some(ur) = &mut self.u_rows {
            ur[i] = scale(ring, u, &ur[i]);
        }
        if let Some(ui) = &mut self.u_inv_cols {
            ui[i] = scale(ring, &ring.inv_unit(u), &ui[i]);
        }
    }

    /// Clears row `i` and column `j` around the pivot, moving to a smaller
    /// pivot whenever a remainder survives. Returns the final pivot.
    fn clear(&mut self, mut i: usize, mut j: usize) -> (usize, usize) {
        let ring = self.ring;
        loop {
            let p = self.entry(i, j);
            let mut best: Option<(usize, usize, R::E)> = None;
            let consider = |r: usize, c: usize, v: R::E, best: &mut Option<(usize, usize, R::E)>| {
                if ring.is_zero(&v) {
                    return;
                }
                let better = match best {
                    None => true,
                    Some((br, bc, bv)) => ring.cmp_size(&v, bv).then((c, r).cmp(&(*bc, *br))) == Ordering::Less,
                };
                if better {
                    *best = Some((r, c, v));
                }
            };
            let others: Vec<usize> = self.col_pat[j].iter().copied().filter(|&r| r != i).collect();
            for r in others {
                let q = ring.quot(&self.entry(r, j), &p);
                if !ring.is_zero(&q) {
                    self.row_axpy(r, &ring.neg(&q), i);
                }
                let rem = self.entry(r, j);
                consider(r, j, rem, &mut best);
            }
            let others: Vec<usize> = self.rows[i].iter().map(|(c, _)| *c).filter(|&c| c != j).collect();
            for c in others {
                let q = ring.quot(&self.entry(i, c), &p);
                if !ring.is_zero(&q) {
                    self.col_axpy(c, &ring.neg(&q), j);
                }
                let rem = self.entry(i, c);
                consider(i, c, rem, &mut best);
            }
            match best {
                None => return (i, j),
                Some((r, c, _)) => {
                    i = r;
                    j = c;
                }
            }
        }
    }
}

/// Computes the Smith normal form of a matrix given by sparse rows.
pub fn smith<R: Ring>(ring: &R, rows: Vec<SparseVec<R::E>>, cols: usize, tracking: Tracking) -> Snf<R> {
    let nrows = rows.len();
    let mut col_pat = vec![BTreeSet::new(); cols];
    let rows: Vec<SparseVec<R::E>> = rows
        .into_iter()
        .map(|mut r| {
            r.retain(|(_, v)| !ring.is_zero(v));
            r.sort_by_key(|(c, _)| *c);
            r
        })
        .collect();
    for (i, r) in rows.iter().enumerate() {
        for (c, _) in r {
            col_pat[*c].insert(i);
        }
    }
    let mut w = Work {
        ring,
        rows,
        col_pat,
        u_rows: tracking.left.then(|| identity_family(ring, nrows)),
        u_inv_cols: tracking.left.then(|| identity_family(ring, nrows)),
        v_cols: tracking.right.then(|| identity_family(ring, cols)),
        v_inv_rows: tracking.right.then(|| identity_family(ring, cols)),
    };
    let mut row_done = vec![false; nrows];
    let mut col_done = vec![false; cols];
    let mut pivots: Vec<(usize, usize)> = Vec::new();

    loop {
        // sweep for unit pivots, fewest row entries first
        let mut progress = false;
        for j in 0..cols {
            if col_done[j] {
                continue;
            }
            let pick = w.col_pat[j]
                .iter()
                .filter(|&&i| !row_done[i] && ring.is_unit(&w.entry(i, j)))
                .min_by_key(|&&i| (w.rows[i].len(), i))
                .copied();
            if let Some(i) = pick {
                let (pi, pj) = w.clear(i, j);
                row_done[pi] = true;
                col_done[pj] = true;
                pivots.push((pi, pj));
                progress = true;
            }
        }
        if progress {
            continue;
        }
        // smallest remaining entry, ties by (column, row)
        let mut best: Option<(usize, usize)> = None;
        for (i, r) in w.rows.iter().enumerate() {
            if row_done[i] {
                continue;
            }
            for (j, v) in r {
                if col_done[*j] {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bi, bj)) => ring.cmp_size(v, &w.entry(bi, bj)).then((*j, i).cmp(&(bj, bi))) == Ordering::Less,
                };
                if better {
                    best = Some((i, *j));
                }
            }
        }
        let Some((i, j)) = best else { break };
        let (pi, pj) = w.clear(i, j);
        row_done[pi] = true;
        col_done[pj] = true;
        pivots.push((pi, pj));
    }

    // divisibility among the non-unit pivots
    let (mut units, mut rest): (Vec<(usize, usize)>, Vec<(usize, usize)>) =
        pivots.into_iter().partition(|&(i, j)| ring.is_unit(&w.entry(i, j)));
    rest.sort_by(|a, b| ring.cmp_size(&w.entry(a.0, a.1), &w.entry(b.0, b.1)).then(a.1.cmp(&b.1)));
    for t in 0..rest.len() {
        for s in t + 1..rest.len() {
            let (a, b) = (w.entry(rest[t].0, rest[t].1), w.entry(rest[s].0, rest[s].1));
            if ring.divides(&a, &b) {
                continue;
            }
            let (g, x, y) = ring.gcdext(&a, &b);
            let alpha = ring.div_exact(&a, &g);
            let beta = ring.div_exact(&b, &g);
            let (ia, ja) = rest[t];
            let (ib, jb) = rest[s];
            let nbeta = ring.neg(&beta);
            w.row_pair(ia, ib, [&x, &y, &nbeta, &alpha]);
            let one = ring.one();
            let m01 = ring.neg(&ring.mul(&y, &beta));
            let m11 = ring.mul(&x, &alpha);
            w.col_pair(ja, jb, [&one, &m01, &one, &m11]);
        }
    }
    units.extend(rest);
    let pivots = units;
    for &(i, j) in &pivots {
        let u = ring.canon_unit(&w.entry(i, j));
        if u != ring.one() {
            w.scale_row(i, &u);
        }
    }
    let diag = pivots.iter().map(|&(i, j)| w.entry(i, j)).collect();
    Snf {
        rows: nrows,
        cols,
        pivots,
        diag,
        u_rows: w.u_rows,
        u_inv_cols: w.u_inv_cols,
        v_cols: w.v_cols,
        v_inv_rows: w.v_inv_rows,
    }
}

/// Dense integer Smith normal form `(U, D, V)` with `U M V = D`, the invariant
/// factors in order along the diagonal.
pub fn smith_normal_form(m: &[Vec<BigInt>]) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let sparse: Vec<SparseVec<BigInt>> = m
        .iter()
        .map(|r| r.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(j, v)| (j, v.clone())).collect())
        .collect();
    let snf = smith(&Integers, sparse, cols, Tracking::BOTH);
    // reorder so that pivot t sits at (t, t)
    let mut row_order: Vec<usize> = snf.pivots.iter().map(|p| p.0).collect();
    row_order.extend(snf.free_rows());
    let mut col_order: Vec<usize> = snf.pivots.iter().map(|p| p.1).collect();
    col_order.extend(snf.free_cols());
    let u_rows = snf.u_rows.as_ref().unwrap();
    let v_cols = snf.v_cols.as_ref().unwrap();
    let dense_row = |v: &SparseVec<BigInt>, n: usize| {
        let mut out = vec![BigInt::zero(); n];
        for (i, x) in v {
            out[*i] = x.clone();
        }
        out
    };
    let u: Vec<Vec<BigInt>> = row_order.iter().map(|&r| dense_row(&u_rows[r], rows)).collect();
    let v_t: Vec<Vec<BigInt>> = col_order.iter().map(|&c| dense_row(&v_cols[c], cols)).collect();
    let v: Vec<Vec<BigInt>> = (0..cols).map(|i| (0..cols).map(|j| v_t[j][i].clone()).collect()).collect();
    let mut d = vec![vec![BigInt::zero(); cols]; rows];
    for (t, x) in snf.diag.iter().enumerate() {
        d[t][t] = x.clone();
    }
    (u, d, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        let inner = b.len();
        let cols = b.first().map_or(0, Vec::len);
        a.iter()
            .map(|r| (0..cols).map(|j| (0..inner).map(|k| &r[k] * &b[k][j]).sum()).collect())
            .collect()
    }

    fn check(m: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        let (u, d, v) = smith_normal_form(m);
        assert_eq!(mul(&mul(&u, m), &v), d);
        d
    }

    #[test]
    fn diag_2_3_becomes_1_6() {
        let d = check(&big(&[&[2, 0], &[0, 3]]));
        assert_eq!(d, big(&[&[1, 0], &[0, 6]]));
    }

    #[test]
    fn zero_and_identity() {
        let (u, d, v) = smith_normal_form(&big(&[&[0, 0], &[0, 0]]));
        assert_eq!(d, big(&[&[0, 0], &[0, 0]]));
        assert_eq!(u, big(&[&[1, 0], &[0, 1]]));
        assert_eq!(v, big(&[&[1, 0], &[0, 1]]));
        assert_eq!(check(&big(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])), big(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]));
    }

    #[test]
    fn mixed_matrix() {
        let d = check(&big(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]));
        assert_eq!(d, big(&[&[2, 0, 0], &[0, 6, 0], &[0, 0, 12]]));
    }

    #[test]
    fn inverse_transforms_are_inverses() {
        let m = big(&[&[4, 6, 0], &[2, 9, 3]]);
        let sparse: Vec<SparseVec<BigInt>> = m
            .iter()
            .map(|r| r.iter().enumerate().map(|(j, v)| (j, v.clone())).collect())
            .collect();
        let snf = smith(&Integers, sparse, 3, Tracking::BOTH);
        let v = snf.v_cols.unwrap();
        let vi = snf.v_inv_rows.unwrap();
        for i in 0..3 {
            for j in 0..3 {
                // (V^{-1} V)_{ij} = row i of V^{-1} . column j of V
                let x = dot(&Integers, &vi[i], &v[j]);
                assert_eq!(x, BigInt::from((i == j) as i64));
            }
        }
        let u = snf.u_rows.unwrap();
        let ui = snf.u_inv_cols.unwrap();
        for i in 0..2 {
            for j in 0..2 {
                // (U U^{-1})_{ij} = row i of U . column j of U^{-1}
                assert_eq!(dot(&Integers, &u[i], &ui[j]), BigInt::from((i == j) as i64));
            }
        }
    }

    #[test]
    fn prime_field_rank() {
        let f = PrimeField(2);
        let rows = vec![vec![(0, 1u64), (1, 1)], vec![(0, 1), (1, 1)]];
        let snf = smith(&f, rows, 2, Tracking::NONE);
        assert_eq!(snf.rank(), 1);
        assert_eq!(PrimeField(7).mul(&3, &PrimeField(7).inv_unit(&3)), 1);
    }
}
