use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use super::simplex::{coface, codegeneracy, degeneracies, factor, Degeneracy, SimplexRef, MAX_DIM};
use crate::error::{Error, Result};

/// Human-readable identity of a generator. Constructions compose the labels of
/// their inputs, so generators can be traced back to where they came from.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Name(String),
    Index(usize),
    /// A face of a standard simplex, as a vertex bitmask.
    Face(u32),
    /// A chain of faces of a standard simplex (bitmasks, increasing).
    Chain(Vec<u32>),
    Degenerate(Box<Label>, Degeneracy),
    Tuple(Vec<Label>),
    Tag(String, Box<Label>),
}

impl Label {
    pub fn name(s: impl Into<String>) -> Self {
        Label::Name(s.into())
    }

    pub fn tag(tag: impl Into<String>, inner: Label) -> Self {
        Label::Tag(tag.into(), Box::new(inner))
    }
}

fn fmt_face(mask: u32, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "{{")?;
    let mut first = true;
    for v in 0..32 {
        if mask & (1 << v) != 0 {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
    }
    write!(f, "}}")
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Name(s) => write!(f, "{s}"),
            Label::Index(i) => write!(f, "#{i}"),
            Label::Face(m) => fmt_face(*m, f),
            Label::Chain(c) => {
                write!(f, "[")?;
                for (i, m) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, "<")?;
                    }
                    fmt_face(*m, f)?;
                }
                write!(f, "]")
            }
            Label::Degenerate(inner, d) => write!(f, "{d}{inner}"),
            Label::Tuple(parts) => {
                write!(f, "(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
            Label::Tag(t, inner) => write!(f, "{t}:{inner}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub label: Label,
    /// `d_0 .. d_n` for an `n`-dimensional generator; empty in degree 0.
    pub faces: Vec<SimplexRef>,
}

/// Face and degeneracy operators addressed by index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operator {
    Face(usize),
    Degeneracy(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    FaceCount { simplex: (usize, usize), expected: usize, found: usize },
    Dangling { simplex: (usize, usize), face: usize, reference: SimplexRef },
    FaceDimension { simplex: (usize, usize), face: usize, reference: SimplexRef },
    /// Pairs `(i, j)`, `i < j`, with `d_i d_j x != d_{j-1} d_i x`.
    Identity { simplex: (usize, usize), pairs: Vec<(usize, usize)> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::FaceCount { simplex, expected, found } => write!(
                f,
                "generator {}#{} has {found} faces, expected {expected}",
                simplex.0, simplex.1
            ),
            Violation::Dangling { simplex, face, reference } => write!(
                f,
                "face d{face} of generator {}#{} refers to missing simplex {reference}",
                simplex.0, simplex.1
            ),
            Violation::FaceDimension { simplex, face, reference } => write!(
                f,
                "face d{face} of generator {}#{} has wrong dimension ({reference})",
                simplex.0, simplex.1
            ),
            Violation::Identity { simplex, pairs } => {
                write!(f, "simplicial identities fail on generator {}#{} for", simplex.0, simplex.1)?;
                for (i, j) in pairs {
                    write!(f, " (d{i}d{j})")?;
                }
                Ok(())
            }
        }
    }
}

/// Diagnostics produced by [`SimplicialSet::validate`]; empty iff well-formed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A finite simplicial set stored by its nondegenerate generators.
///
/// `truncation` records whether the set stands for the `N`-skeleton of a
/// larger object: `Some(n)` means homology is only trustworthy in degrees
/// below `n`; `None` means the set is the whole object.
#[derive(Clone, Debug)]
pub struct SimplicialSet {
    levels: Vec<Vec<Generator>>,
    truncation: Option<usize>,
    lookup: OnceLock<HashMap<Label, SimplexRef>>,
}

impl PartialEq for SimplicialSet {
    fn eq(&self, other: &Self) -> bool {
        self.truncation == other.truncation && self.trimmed_levels() == other.trimmed_levels()
    }
}

impl Eq for SimplicialSet {}

impl SimplicialSet {
    /// Builds a simplicial set, rejecting dangling or mis-dimensioned face
    /// references. Simplicial identities are not checked here; see
    /// [`validate`](Self::validate).
    pub fn new(levels: Vec<Vec<Generator>>, truncation: Option<usize>) -> Result<Self> {
        let set = Self::from_levels_unchecked(levels, truncation);
        if let Some(v) = set.structural_violations().into_iter().next() {
            return Err(Error::Malformed(v.to_string()));
        }
        Ok(set)
    }

    pub fn from_levels_unchecked(mut levels: Vec<Vec<Generator>>, truncation: Option<usize>) -> Self {
        if levels.is_empty() {
            levels.push(Vec::new());
        }
        SimplicialSet { levels, truncation, lookup: OnceLock::new() }
    }

    pub fn empty() -> Self {
        Self::from_levels_unchecked(vec![Vec::new()], None)
    }

    pub fn point() -> Self {
        Self::discrete([Label::name("*")])
    }

    /// A discrete simplicial set with one vertex per label.
    pub fn discrete(labels: impl IntoIterator<Item = Label>) -> Self {
        let level = labels.into_iter().map(|label| Generator { label, faces: Vec::new() }).collect();
        Self::from_levels_unchecked(vec![level], None)
    }

    fn trimmed_levels(&self) -> &[Vec<Generator>] {
        let top = self.dim().map_or(0, |d| d + 1);
        &self.levels[..top]
    }

    /// Highest degree that storage reserves (possibly empty).
    pub fn max_dim(&self) -> usize {
        self.levels.len() - 1
    }

    /// Highest degree carrying a generator; `None` for the empty set.
    pub fn dim(&self) -> Option<usize> {
        self.levels.iter().rposition(|l| !l.is_empty())
    }

    pub fn is_empty(&self) -> bool {
        self.levels[0].is_empty()
    }

    pub fn truncation(&self) -> Option<usize> {
        self.truncation
    }

    pub fn with_truncation(mut self, truncation: Option<usize>) -> Self {
        self.truncation = truncation;
        self
    }

    /// Whether `H_k` computed from this set equals that of the represented object.
    pub fn homology_valid(&self, k: usize) -> bool {
        self.truncation.map_or(true, |t| k < t)
    }

    /// Largest degree with trustworthy homology, if bounded.
    pub fn valid_up_to(&self) -> Option<usize> {
        self.truncation.map(|t| t.saturating_sub(1))
    }

    pub fn count(&self, dim: usize) -> usize {
        self.levels.get(dim).map_or(0, Vec::len)
    }

    /// Generator counts per degree up to the top nonempty degree.
    pub fn counts(&self) -> Vec<usize> {
        self.trimmed_levels().iter().map(Vec::len).collect()
    }

    pub fn total_generators(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.levels
            .iter()
            .enumerate()
            .map(|(d, l)| if d % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) })
            .sum()
    }

    pub fn level(&self, dim: usize) -> &[Generator] {
        self.levels.get(dim).map_or(&[], Vec::as_slice)
    }

    pub fn generator(&self, dim: usize, gen: usize) -> &Generator {
        &self.levels[dim][gen]
    }

    /// All nondegenerate generators as simplices, degree by degree.
    pub fn generators(&self) -> impl Iterator<Item = SimplexRef> + '_ {
        self.levels
            .iter()
            .enumerate()
            .flat_map(|(d, l)| (0..l.len()).map(move |g| SimplexRef::generator(d, g)))
    }

    pub fn contains(&self, x: SimplexRef) -> bool {
        x.degeneracy.len() <= x.dim() && x.gen() < self.count(x.gen_dim())
    }

    /// Label of a simplex; degenerate simplices wrap their generator's label.
    pub fn label(&self, x: SimplexRef) -> Label {
        let base = self.levels[x.gen_dim()][x.gen()].label.clone();
        if x.is_degenerate() {
            Label::Degenerate(Box::new(base), x.degeneracy)
        } else {
            base
        }
    }

    pub fn gen_label(&self, x: SimplexRef) -> &Label {
        &self.levels[x.gen_dim()][x.gen()].label
    }

    /// Finds a generator by label (first match).
    pub fn find(&self, label: &Label) -> Option<SimplexRef> {
        let map = self.lookup.get_or_init(|| {
            let mut map = HashMap::with_capacity(self.total_generators());
            for x in self.generators() {
                map.entry(self.gen_label(x).clone()).or_insert(x);
            }
            map
        });
        map.get(label).copied()
    }

    pub fn find_name(&self, name: &str) -> Option<SimplexRef> {
        self.find(&Label::name(name))
    }

    /// Applies an order-preserving map `theta: [k] -> [dim x]` to `x`, returning
    /// the result in normal form.
    pub fn apply(&self, x: SimplexRef, theta: &[usize]) -> SimplexRef {
        let n = x.dim();
        debug_assert!(theta.iter().all(|&t| t <= n));
        let eta = x.degeneracy.surjection(n);
        let composite: Vec<usize> = theta.iter().map(|&t| eta[t]).collect();
        let (eps, image) = factor(&composite);
        let k = theta.len() - 1;
        let face = self.generator_face(x.gen_dim(), x.gen(), &image);
        face.degenerate_to(eps, k)
    }

    /// The face of a generator spanned by the given sorted vertices.
    fn generator_face(&self, gdim: usize, gen: usize, image: &[usize]) -> SimplexRef {
        if image.len() == gdim + 1 {
            return SimplexRef::generator(gdim, gen);
        }
        // drop the largest missing vertex
        let j = (0..=gdim)
            .rev()
            .find(|v| image.binary_search(v).is_err())
            .expect("proper face misses a vertex");
        let face = self.levels[gdim][gen].faces[j];
        let reindexed: Vec<usize> = image.iter().map(|&v| if v < j { v } else { v - 1 }).collect();
        self.apply(face, &reindexed)
    }

    pub fn face(&self, x: SimplexRef, i: usize) -> SimplexRef {
        self.apply(x, &coface(x.dim(), i))
    }

    pub fn degeneracy(&self, x: SimplexRef, i: usize) -> SimplexRef {
        self.apply(x, &codegeneracy(x.dim(), i))
    }

    /// Checked operator application.
    pub fn apply_operator(&self, x: SimplexRef, op: Operator) -> Result<SimplexRef> {
        if !self.contains(x) {
            return Err(Error::UnknownSimplex(x.to_string()));
        }
        match op {
            Operator::Face(i) => {
                if x.dim() == 0 || i > x.dim() {
                    return Err(Error::OperatorOutOfRange { index: i, dim: x.dim() });
                }
                Ok(self.face(x, i))
            }
            Operator::Degeneracy(i) => {
                if i > x.dim() {
                    return Err(Error::OperatorOutOfRange { index: i, dim: x.dim() });
                }
                if x.dim() + 1 > MAX_DIM {
                    return Err(Error::DimensionTooLarge(x.dim() + 1));
                }
                Ok(self.degeneracy(x, i))
            }
        }
    }

    /// The vertices of a simplex, in order.
    pub fn vertices(&self, x: SimplexRef) -> Vec<SimplexRef> {
        (0..=x.dim()).map(|v| self.apply(x, &[v])).collect()
    }

    /// Every simplex of dimension `k`, degenerate ones included, sorted.
    pub fn simplices(&self, k: usize) -> Vec<SimplexRef> {
        let mut out = Vec::new();
        for m in 0..=k.min(self.max_dim()) {
            let n = self.count(m);
            if n == 0 {
                continue;
            }
            let degs = degeneracies(k, m);
            for g in 0..n {
                for &d in &degs {
                    out.push(SimplexRef { dim: k as u8, gen: g as u32, degeneracy: d });
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn structural_violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (d, level) in self.levels.iter().enumerate() {
            for (g, gen) in level.iter().enumerate() {
                let expected = if d == 0 { 0 } else { d + 1 };
                if gen.faces.len() != expected {
                    out.push(Violation::FaceCount { simplex: (d, g), expected, found: gen.faces.len() });
                    continue;
                }
                for (i, &f) in gen.faces.iter().enumerate() {
                    if f.dim() + 1 != d || f.degeneracy.len() > f.dim() {
                        out.push(Violation::FaceDimension { simplex: (d, g), face: i, reference: f });
                    } else if !self.contains(f) {
                        out.push(Violation::Dangling { simplex: (d, g), face: i, reference: f });
                    }
                }
            }
        }
        out
    }

    /// Lists every dangling reference and simplicial-identity violation.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = self.structural_violations();
        if !violations.is_empty() {
            return ValidationReport { violations };
        }
        for (d, level) in self.levels.iter().enumerate() {
            if d < 2 {
                continue;
            }
            for (g, gen) in level.iter().enumerate() {
                let mut pairs = Vec::new();
                for j in 1..=d {
                    for i in 0..j {
                        if self.face(gen.faces[j], i) != self.face(gen.faces[i], j - 1) {
                            pairs.push((i, j));
                        }
                    }
                }
                if !pairs.is_empty() {
                    violations.push(Violation::Identity { simplex: (d, g), pairs });
                }
            }
        }
        ValidationReport { violations }
    }

    /// Raises the storage bound without adding generators.
    pub fn padded_to(mut self, dim: usize) -> Self {
        while self.levels.len() <= dim {
            self.levels.push(Vec::new());
        }
        self
    }
}

impl SimplexRef {
    /// Applies a degeneracy landing in dimension `k`.
    pub(crate) fn degenerate_to(self, eps: Degeneracy, k: usize) -> SimplexRef {
        debug_assert_eq!(k, self.dim() + eps.len());
        self.degenerate(eps)
    }
}

/// Incremental construction of a simplicial set.
#[derive(Default, Debug)]
pub struct Builder {
    levels: Vec<Vec<Generator>>,
}

impl Builder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, label: Label, faces: Vec<SimplexRef>) -> SimplexRef {
        let d = if faces.is_empty() { 0 } else { faces.len() - 1 };
        while self.levels.len() <= d {
            self.levels.push(Vec::new());
        }
        self.levels[d].push(Generator { label, faces });
        SimplexRef::generator(d, self.levels[d].len() - 1)
    }

    pub fn vertex(&mut self, label: Label) -> SimplexRef {
        self.add(label, Vec::new())
    }

    pub fn build(self, truncation: Option<usize>) -> Result<SimplicialSet> {
        SimplicialSet::new(self.levels, truncation)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::standard_simplex;

    #[test]
    fn face_of_degeneracy_is_identity() {
        let d2 = standard_simplex(2);
        let top = SimplexRef::generator(2, 0);
        for i in 0..=2 {
            let s = d2.degeneracy(top, i);
            assert_eq!(d2.face(s, i), top);
            assert_eq!(d2.face(s, i + 1), top);
        }
    }

    #[test]
    fn d0_of_top_triangle_is_12() {
        let d2 = standard_simplex(2);
        let top = SimplexRef::generator(2, 0);
        let f = d2.face(top, 0);
        assert_eq!(d2.gen_label(f), &Label::Face(0b110));
    }

    #[test]
    fn checked_operator_rejects_out_of_range() {
        let d1 = standard_simplex(1);
        let e = SimplexRef::generator(1, 0);
        assert!(d1.apply_operator(e, Operator::Face(2)).is_err());
        assert!(d1.apply_operator(SimplexRef::generator(0, 0), Operator::Face(0)).is_err());
        assert!(d1.apply_operator(e, Operator::Degeneracy(1)).is_ok());
    }

    #[test]
    fn s0_s0_vertex_is_word_10() {
        let p = SimplicialSet::point();
        let v = SimplexRef::generator(0, 0);
        let once = p.degeneracy(v, 0);
        let twice = p.degeneracy(once, 0);
        assert_eq!(twice.degeneracy.indices(), vec![1, 0]);
    }

    #[test]
    fn swapped_faces_are_flagged() {
        // a triangle whose d0 and d1 are swapped
        let mut b = Builder::new();
        let v0 = b.vertex(Label::name("0"));
        let v1 = b.vertex(Label::name("1"));
        let v2 = b.vertex(Label::name("2"));
        let e01 = b.add(Label::name("01"), vec![v1, v0]);
        let e02 = b.add(Label::name("02"), vec![v2, v0]);
        let e12 = b.add(Label::name("12"), vec![v2, v1]);
        b.add(Label::name("012"), vec![e02, e12, e01]);
        let set = b.build(None).unwrap();
        let report = set.validate();
        assert_eq!(report.violations.len(), 1);
        assert!(matches!(&report.violations[0], Violation::Identity { simplex: (2, 0), .. }));
    }

    #[test]
    fn dangling_reference_rejected() {
        let mut b = Builder::new();
        let v = b.vertex(Label::name("v"));
        b.add(Label::name("e"), vec![v, SimplexRef::generator(0, 7)]);
        assert!(b.build(None).is_err());
        let mut b = Builder::new();
        let v = b.vertex(Label::name("v"));
        b.add(Label::name("e"), vec![v, SimplexRef::generator(0, 7)]);
        let raw = SimplicialSet::from_levels_unchecked(b.levels, None);
        assert_eq!(raw.validate().violations.len(), 1);
    }
}
