//! Standard building blocks: simplices, boundaries, polygons, nerves,
//! presentation complexes and suspensions.

use std::collections::HashMap;
use std::sync::Arc;

use super::map::SimplicialMap;
use super::product::product;
use super::pushout::{disjoint_union, pushout};
use super::set::{Builder, Generator, Label, SimplicialSet};
use super::simplex::{factor, SimplexRef};
use crate::error::{Error, Result};

fn subsets_of_size(n: usize, size: usize) -> Vec<u32> {
    let mut out = Vec::new();
    fn rec(start: usize, n: usize, left: usize, mask: u32, out: &mut Vec<u32>) {
        if left == 0 {
            out.push(mask);
            return;
        }
        for v in start..=n {
            if n + 1 - v < left {
                break;
            }
            rec(v + 1, n, left - 1, mask | (1 << v), out);
        }
    }
    rec(0, n, size, 0, &mut out);
    out
}

fn simplex_levels(n: usize, top: usize) -> Vec<Vec<Generator>> {
    let masks: Vec<Vec<u32>> = (0..=top).map(|k| subsets_of_size(n, k + 1)).collect();
    let pos: Vec<HashMap<u32, usize>> =
        masks.iter().map(|l| l.iter().enumerate().map(|(i, &m)| (m, i)).collect()).collect();
    masks
        .iter()
        .enumerate()
        .map(|(k, level)| {
            level
                .iter()
                .map(|&m| {
                    let faces = if k == 0 {
                        Vec::new()
                    } else {
                        let verts: Vec<u32> = (0..32).filter(|v| m & (1 << v) != 0).collect();
                        verts
                            .iter()
                            .map(|&v| SimplexRef::generator(k - 1, pos[k - 1][&(m & !(1 << v))]))
                            .collect()
                    };
                    Generator { label: Label::Face(m), faces }
                })
                .collect()
        })
        .collect()
}

/// `Δ[n]`: generators are the nonempty subsets of `{0..n}`, labelled by mask.
pub fn standard_simplex(n: usize) -> SimplicialSet {
    SimplicialSet::from_levels_unchecked(simplex_levels(n, n), None)
}

/// The `bound`-skeleton of `Δ[n]`, truncated if `bound < n`.
pub fn standard_simplex_truncated(n: usize, bound: usize) -> SimplicialSet {
    if bound >= n {
        return standard_simplex(n);
    }
    SimplicialSet::from_levels_unchecked(simplex_levels(n, bound), Some(bound))
}

/// `∂Δ[n]`, an exact object with an empty top level.
pub fn boundary(n: usize) -> Result<SimplicialSet> {
    if n == 0 {
        return Err(Error::EmptyBoundary);
    }
    let mut levels = simplex_levels(n, n);
    levels[n].clear();
    Ok(SimplicialSet::from_levels_unchecked(levels, None))
}

/// The simplex of `Δ[n]` (as built by [`standard_simplex`]) with the given
/// nondecreasing vertex list.
pub fn delta_simplex(delta: &SimplicialSet, vertices: &[usize]) -> SimplexRef {
    let (eps, image) = factor(vertices);
    let mask = image.iter().fold(0u32, |m, &v| m | (1 << v));
    delta
        .find(&Label::Face(mask))
        .expect("vertex list inside the simplex")
        .degenerate(eps)
}

/// Vertex list of a simplex of a standard simplex.
pub fn delta_vertices(delta: &SimplicialSet, x: SimplexRef) -> Vec<usize> {
    let Label::Face(mask) = delta.gen_label(x) else {
        panic!("not a simplex of a standard simplex");
    };
    let verts: Vec<usize> = (0..32).filter(|v| mask & (1 << v) != 0).collect();
    x.degeneracy.surjection(x.dim()).into_iter().map(|t| verts[t]).collect()
}

/// The map `Δ[n] -> B` classifying an `n`-simplex `sigma` of `B`. The source
/// is `delta`, which must be (a skeleton of) `Δ[n]`.
pub fn representing_map(delta: Arc<SimplicialSet>, base: Arc<SimplicialSet>, sigma: SimplexRef) -> SimplicialMap {
    SimplicialMap::from_fn(delta.clone(), base.clone(), |x| base.apply(sigma, &delta_vertices(&delta, x)))
}

/// The map `Δ[k] -> Δ[n]` given by an order map `[k] -> [n]`.
pub fn delta_map(source: Arc<SimplicialSet>, target: Arc<SimplicialSet>, theta: &[usize]) -> SimplicialMap {
    SimplicialMap::from_fn(source.clone(), target.clone(), |x| {
        let verts: Vec<usize> = delta_vertices(&source, x).into_iter().map(|v| theta[v]).collect();
        delta_simplex(&target, &verts)
    })
}

/// A circle made of `n` vertices and `n` edges; edge `i` runs from `i` to `i + 1`.
pub fn polygon(n: usize) -> SimplicialSet {
    assert!(n > 0);
    let mut b = Builder::new();
    let vs: Vec<SimplexRef> = (0..n).map(|i| b.vertex(Label::Index(i))).collect();
    for i in 0..n {
        b.add(Label::tag("e", Label::Index(i)), vec![vs[(i + 1) % n], vs[i]]);
    }
    b.build(None).expect("polygon is well formed")
}

/// The covering `C_{mn} -> C_n`, `i ↦ i mod n`.
pub fn polygon_covering(source: Arc<SimplicialSet>, target: Arc<SimplicialSet>) -> SimplicialMap {
    let n = target.count(0);
    SimplicialMap::from_fn(source, target, |x| SimplexRef::generator(x.dim(), x.gen() % n))
}

/// Nerve of a finite poset: nondegenerate `q`-simplices are strict chains of
/// `q + 1` elements.
pub fn nerve_of_poset(
    size: usize,
    less: impl Fn(usize, usize) -> bool,
    label: impl Fn(&[usize]) -> Label,
) -> SimplicialSet {
    let mut chains: Vec<Vec<Vec<usize>>> = vec![(0..size).map(|e| vec![e]).collect()];
    loop {
        let last = chains.last().unwrap();
        let mut next = Vec::new();
        for c in last {
            let top = *c.last().unwrap();
            for e in 0..size {
                if less(top, e) {
                    let mut longer = c.clone();
                    longer.push(e);
                    next.push(longer);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort();
        chains.push(next);
    }
    let pos: Vec<HashMap<&[usize], usize>> = chains
        .iter()
        .map(|l| l.iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect())
        .collect();
    let levels = chains
        .iter()
        .enumerate()
        .map(|(q, level)| {
            level
                .iter()
                .map(|c| {
                    let faces = if q == 0 {
                        Vec::new()
                    } else {
                        (0..=q)
                            .map(|i| {
                                let mut f = c.clone();
                                f.remove(i);
                                SimplexRef::generator(q - 1, pos[q - 1][f.as_slice()])
                            })
                            .collect()
                    };
                    Generator { label: label(c), faces }
                })
                .collect()
        })
        .collect();
    SimplicialSet::from_levels_unchecked(levels, None)
}

/// A word in the free group: letters (by index) with exponents `±1`.
pub type Word = Vec<(usize, i8)>;

/// Parses words such as `s^3(ts)^-2` over the given letters. Letters are
/// matched greedily, longest first.
pub fn parse_word(text: &str, letters: &[&str]) -> Result<Word> {
    let mut order: Vec<usize> = (0..letters.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(letters[i].len()));
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0;
    let word = parse_seq(&chars, &mut pos, letters, &order)?;
    if pos < chars.len() {
        return Err(Error::WordSyntax { pos, msg: format!("unexpected `{}`", chars[pos]) });
    }
    Ok(word)
}

fn parse_seq(chars: &[char], pos: &mut usize, letters: &[&str], order: &[usize]) -> Result<Word> {
    let mut out = Word::new();
    loop {
        while *pos < chars.len() && chars[*pos].is_whitespace() {
            *pos += 1;
        }
        if *pos >= chars.len() || chars[*pos] == ')' {
            return Ok(out);
        }
        let atom: Word = if chars[*pos] == '(' {
            *pos += 1;
            let inner = parse_seq(chars, pos, letters, order)?;
            if *pos >= chars.len() || chars[*pos] != ')' {
                return Err(Error::WordSyntax { pos: *pos, msg: "missing `)`".into() });
            }
            *pos += 1;
            inner
        } else {
            let rest: String = chars[*pos..].iter().collect();
            let Some(&l) = order.iter().find(|&&l| !letters[l].is_empty() && rest.starts_with(letters[l])) else {
                let bad: String = chars[*pos..].iter().take_while(|c| c.is_alphanumeric()).collect();
                let bad = if bad.is_empty() { chars[*pos].to_string() } else { bad };
                return Err(Error::UnknownLetter(bad));
            };
            *pos += letters[l].chars().count();
            vec![(l, 1)]
        };
        let exp = parse_exponent(chars, pos)?;
        let unit: Word = if exp < 0 { atom.iter().rev().map(|&(l, e)| (l, -e)).collect() } else { atom };
        for _ in 0..exp.unsigned_abs() {
            out.extend_from_slice(&unit);
        }
    }
}

fn parse_exponent(chars: &[char], pos: &mut usize) -> Result<i64> {
    if *pos >= chars.len() || chars[*pos] != '^' {
        return Ok(1);
    }
    *pos += 1;
    let start = *pos;
    let neg = *pos < chars.len() && chars[*pos] == '-';
    if neg {
        *pos += 1;
    }
    let digits: String = chars[*pos..].iter().take_while(|c| c.is_ascii_digit()).collect();
    if digits.is_empty() {
        return Err(Error::WordSyntax { pos: start, msg: "expected an exponent".into() });
    }
    *pos += digits.len();
    let v: i64 = digits.parse().map_err(|_| Error::WordSyntax { pos: start, msg: "exponent too large".into() })?;
    Ok(if neg { -v } else { v })
}

/// Freely reduces a word.
pub fn reduce_word(word: &[(usize, i8)]) -> Word {
    let mut out: Word = Vec::with_capacity(word.len());
    for &(l, e) in word {
        if out.last() == Some(&(l, -e)) {
            out.pop();
        } else {
            out.push((l, e));
        }
    }
    out
}

/// The presentation 2-complex: one vertex `v`, a loop per letter, and for each
/// relator of length `L` a disc made of `L` triangles around a hub vertex.
/// The hub also serves relators of length 1 and 2, so no degenerate cells
/// are needed.
pub fn presentation_complex(letters: &[&str], relators: &[Word]) -> Result<SimplicialSet> {
    let mut b = Builder::new();
    let v = b.vertex(Label::name("v"));
    let loops: Vec<SimplexRef> = letters.iter().map(|l| b.add(Label::name(*l), vec![v, v])).collect();
    for (r, word) in relators.iter().enumerate() {
        if word.is_empty() {
            return Err(Error::EmptyRelator);
        }
        if let Some(&(l, _)) = word.iter().find(|(l, _)| *l >= letters.len()) {
            return Err(Error::UnknownLetter(format!("#{l}")));
        }
        let hub = b.vertex(Label::tag("hub", Label::Index(r)));
        let len = word.len();
        let spokes: Vec<SimplexRef> = (0..len)
            .map(|t| b.add(Label::tag(format!("spoke{r}"), Label::Index(t)), vec![v, hub]))
            .collect();
        for (t, &(l, e)) in word.iter().enumerate() {
            let (here, next) = (spokes[t], spokes[(t + 1) % len]);
            let faces = if e > 0 { vec![loops[l], next, here] } else { vec![loops[l], here, next] };
            b.add(Label::tag(format!("cell{r}"), Label::Index(t)), faces);
        }
    }
    b.build(None)
}

/// Parses relator strings and builds the presentation complex.
pub fn presentation_complex_from_text(letters: &[&str], relators: &[&str]) -> Result<SimplicialSet> {
    let words = relators.iter().map(|r| parse_word(r, letters)).collect::<Result<Vec<_>>>()?;
    presentation_complex(letters, &words)
}

/// `⟨s, t | s^3 (ts)^-2, t^5 (ts)^-2⟩`, a perfect group with an acyclic
/// presentation complex.
pub fn binary_icosahedral() -> SimplicialSet {
    presentation_complex_from_text(&["s", "t"], &["s^3(ts)^-2", "t^5(ts)^-2"])
        .expect("fixed presentation is valid")
}

/// Unreduced suspension: `X × Δ[1]` with each end collapsed to a pole,
/// together with the induced map to `Δ[1]`.
pub fn suspension(x: &Arc<SimplicialSet>) -> Result<(Arc<SimplicialSet>, SimplicialMap)> {
    if x.is_empty() {
        return Err(Error::EmptySuspension);
    }
    let d1 = Arc::new(standard_simplex(1));
    let bound = x.dim().unwrap_or(0) + 1;
    let cyl = product(x.clone(), d1.clone(), bound);
    let ends = disjoint_union(&[x.clone(), x.clone()]);
    let poles = Arc::new(SimplicialSet::discrete([Label::name("pole0"), Label::name("pole1")]));
    let at = |end: usize, s: SimplexRef| -> SimplexRef {
        let c = d1.apply(SimplexRef::generator(0, end), &vec![0; s.dim() + 1]);
        cyl.simplex(&[s, c]).expect("end simplices lie in the cylinder")
    };
    let incl = SimplicialMap::from_fn(ends.set.clone(), cyl.set().clone(), |s| {
        let (end, s) = ends.locate(s);
        at(end, s)
    });
    let collapse = SimplicialMap::from_fn(ends.set.clone(), poles.clone(), |s| {
        let (end, _) = ends.locate(s);
        poles.apply(SimplexRef::generator(0, end), &vec![0; s.dim() + 1])
    });
    let glued = pushout(&incl, &collapse, bound)?;
    let pole_map = SimplicialMap::from_fn(poles.clone(), d1.clone(), |s| s);
    let to_interval = glued.induced(&cyl.projection(1), &pole_map);
    let set = glued.set.clone();
    Ok((set.clone(), to_interval.with_ends(set, d1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_counts_are_binomial() {
        assert_eq!(standard_simplex(0).counts(), vec![1]);
        assert_eq!(standard_simplex(2).counts(), vec![3, 3, 1]);
        assert_eq!(standard_simplex(3).counts(), vec![4, 6, 4, 1]);
        assert!(standard_simplex(3).validate().is_empty());
    }

    #[test]
    fn boundary_counts() {
        assert_eq!(boundary(1).unwrap().counts(), vec![2]);
        assert_eq!(boundary(2).unwrap().counts(), vec![3, 3]);
        assert_eq!(boundary(3).unwrap().counts(), vec![4, 6, 4]);
        assert!(boundary(4).unwrap().validate().is_empty());
        assert_eq!(boundary(0), Err(Error::EmptyBoundary));
    }

    #[test]
    fn vertex_lists_round_trip() {
        let d3 = standard_simplex(3);
        for k in 0..=4 {
            for x in d3.simplices(k) {
                assert_eq!(delta_simplex(&d3, &delta_vertices(&d3, x)), x);
            }
        }
    }

    #[test]
    fn word_parser_expands_powers() {
        let w = parse_word("s^3(ts)^-2", &["s", "t"]).unwrap();
        assert_eq!(w, vec![(0, 1), (0, 1), (0, 1), (0, -1), (1, -1), (0, -1), (1, -1)]);
        assert!(matches!(parse_word("sx", &["s"]), Err(Error::UnknownLetter(_))));
        assert!(matches!(parse_word("(s", &["s"]), Err(Error::WordSyntax { .. })));
    }

    #[test]
    fn presentation_complexes_are_valid() {
        let disc = presentation_complex_from_text(&["a"], &["a"]).unwrap();
        assert!(disc.validate().is_empty());
        assert_eq!(disc.euler_characteristic(), 1);
        let bi = binary_icosahedral();
        assert!(bi.validate().is_empty());
        assert_eq!(bi.euler_characteristic(), 1);
        assert!(presentation_complex(&["a"], &[vec![]]).is_err());
        let two = presentation_complex_from_text(&["a"], &["a^-2"]).unwrap();
        assert!(two.validate().is_empty());
    }

    #[test]
    fn suspension_of_two_points_is_a_circle() {
        let s0 = Arc::new(boundary(1).unwrap());
        let (s, map) = suspension(&s0).unwrap();
        assert_eq!(s.counts(), vec![2, 2]);
        assert!(s.validate().is_empty());
        assert!(map.is_valid());
        assert!(suspension(&Arc::new(SimplicialSet::empty())).is_err());
    }

    #[test]
    fn polygon_covering_is_simplicial() {
        let c6 = Arc::new(polygon(6));
        let c3 = Arc::new(polygon(3));
        assert!(polygon_covering(c6, c3).is_valid());
    }

    #[test]
    fn nerve_of_chain_poset_is_simplex() {
        let n = nerve_of_poset(3, |a, b| a < b, |c| Label::Index(c.len()));
        assert_eq!(n.counts(), vec![3, 3, 1]);
        assert!(n.validate().is_empty());
    }
}
