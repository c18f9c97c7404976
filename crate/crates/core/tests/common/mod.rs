//! Independent reference computations: a dense integer Smith form over
//! `i128`, chain matrices read straight off the generators, and the
//! normalized bar complex of a cyclic group.

#![allow(dead_code)]

use hofib::SimplicialSet;

/// `(free rank, torsion coefficients > 1)` per degree.
pub type Table = Vec<(usize, Vec<i128>)>;

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Nonzero invariant factors of a dense matrix.
pub fn invariant_factors(mut m: Vec<Vec<i128>>) -> Vec<i128> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for r in t..rows {
            for c in t..cols {
                if m[r][c] != 0 && best.is_none_or(|(br, bc)| m[r][c].abs() < m[br][bc].abs()) {
                    best = Some((r, c));
                }
            }
        }
        let Some((r, c)) = best else { break };
        m.swap(t, r);
        for row in m.iter_mut() {
            row.swap(t, c);
        }
        loop {
            let p = m[t][t];
            let mut dirty = false;
            for r in t + 1..rows {
                let q = m[r][t] / p;
                if q != 0 {
                    for c in t..cols {
                        m[r][c] -= q * m[t][c];
                    }
                }
                dirty |= m[r][t] != 0;
            }
            for c in t + 1..cols {
                let q = m[t][c] / p;
                if q != 0 {
                    for row in m.iter_mut().skip(t) {
                        row[c] -= q * row[t];
                    }
                }
                dirty |= m[t][c] != 0;
            }
            if !dirty {
                break;
            }
            // move a smaller remainder into the pivot
            let mut best = (t, t);
            for r in t..rows {
                if m[r][t] != 0 && m[r][t].abs() < m[best.0][best.1].abs() {
                    best = (r, t);
                }
            }
            for c in t..cols {
                if m[t][c] != 0 && m[t][c].abs() < m[best.0][best.1].abs() {
                    best = (t, c);
                }
            }
            m.swap(t, best.0);
            for row in m.iter_mut() {
                row.swap(t, best.1);
            }
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    // gcd/lcm normalization yields the divisibility chain
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            let g = gcd(diag[i], diag[j]);
            let l = diag[i] / g * diag[j];
            diag[i] = g;
            diag[j] = l;
        }
    }
    diag
}

/// Homology from dense boundary matrices: `d[k]` maps degree `k` to `k - 1`
/// (rows: degree `k - 1`); `dims[k]` is the rank of the chain group.
pub fn homology_from(dims: &[usize], d: &[Vec<Vec<i128>>], up_to: usize) -> Table {
    let factors: Vec<Vec<i128>> = (0..=up_to + 1)
        .map(|k| if k == 0 || k >= dims.len() { Vec::new() } else { invariant_factors(d[k].clone()) })
        .collect();
    (0..=up_to)
        .map(|k| {
            let dim = dims.get(k).copied().unwrap_or(0);
            let out_rank = factors[k].len();
            let in_factors = &factors[k + 1];
            let torsion: Vec<i128> = in_factors.iter().copied().filter(|&f| f > 1).collect();
            (dim - out_rank - in_factors.len(), torsion)
        })
        .collect()
}

/// Normalized chain matrices read off the generator face lists.
pub fn chain_matrices(x: &SimplicialSet) -> (Vec<usize>, Vec<Vec<Vec<i128>>>) {
    let top = x.max_dim();
    let dims: Vec<usize> = (0..=top).map(|k| x.count(k)).collect();
    let mut d = vec![Vec::new()];
    for k in 1..=top {
        let mut m = vec![vec![0i128; dims[k]]; dims[k - 1]];
        for (j, g) in x.level(k).iter().enumerate() {
            for (i, f) in g.faces.iter().enumerate() {
                if f.degeneracy.is_identity() {
                    m[f.gen as usize][j] += if i % 2 == 0 { 1 } else { -1 };
                }
            }
        }
        d.push(m);
    }
    (dims, d)
}

pub fn reference_homology(x: &SimplicialSet, up_to: usize) -> Table {
    let (dims, d) = chain_matrices(x);
    homology_from(&dims, &d, up_to)
}

/// `H_k(ℤ/n; ℤ)` for `k <= up_to` from the normalized bar complex.
pub fn bar_homology_cyclic(n: usize, up_to: usize) -> Table {
    let tuples = |k: usize| -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for _ in 0..k {
            out = out.into_iter().flat_map(|t| (1..n).map(move |g| [t.clone(), vec![g]].concat())).collect();
        }
        out
    };
    let bases: Vec<Vec<Vec<usize>>> = (0..=up_to + 1).map(tuples).collect();
    let dims: Vec<usize> = bases.iter().map(|b| b.len()).collect();
    let mut d = vec![Vec::new()];
    for k in 1..=up_to + 1 {
        let pos = |t: &[usize]| bases[k - 1].iter().position(|b| b == t);
        let mut m = vec![vec![0i128; dims[k]]; dims[k - 1]];
        for (j, t) in bases[k].iter().enumerate() {
            let mut add = |v: Vec<usize>, s: i128| {
                if v.iter().all(|&g| g != 0) {
                    m[pos(&v).unwrap()][j] += s;
                }
            };
            add(t[1..].to_vec(), 1);
            for i in 1..k {
                let mut v = t[..i - 1].to_vec();
                v.push((t[i - 1] + t[i]) % n);
                v.extend_from_slice(&t[i + 1..]);
                add(v, if i % 2 == 0 { 1 } else { -1 });
            }
            add(t[..k - 1].to_vec(), if k % 2 == 0 { 1 } else { -1 });
        }
        d.push(m);
    }
    homology_from(&dims, &d, up_to)
}

/// Renders a table the way `HomologyGroup` displays.
pub fn render(t: &Table) -> Vec<String> {
    t.iter()
        .map(|(free, tors)| {
            let mut parts = Vec::new();
            match *free {
                0 => {}
                1 => parts.push("Z".to_string()),
                r => parts.push(format!("Z^{r}")),
            }
            parts.extend(tors.iter().map(|q| format!("Z/{q}")));
            if parts.is_empty() {
                "0".into()
            } else {
                parts.join(" + ")
            }
        })
        .collect()
}

/// Number of strict chains of nonempty subsets of `{0..n}`, by length.
pub fn chain_counts(n: usize) -> Vec<usize> {
    let faces: Vec<u32> = (1..(1u32 << (n + 1))).collect();
    let mut counts = vec![0usize; n + 1];
    fn go(last: u32, len: usize, faces: &[u32], counts: &mut [usize]) {
        counts[len] += 1;
        for &f in faces {
            if f != last && f & last == last {
                go(f, len + 1, faces, counts);
            }
        }
    }
    for &f in &faces {
        go(f, 0, &faces, &mut counts);
    }
    counts
}

/// The map between simplex-like sets (faces labelled by vertex masks)
/// induced by a vertex map.
pub fn vertex_map(
    source: std::sync::Arc<SimplicialSet>,
    target: std::sync::Arc<SimplicialSet>,
    vmap: &[usize],
) -> hofib::SimplicialMap {
    let (s, t) = (source.clone(), target.clone());
    let vmap = vmap.to_vec();
    hofib::SimplicialMap::from_fn(source, target, move |x| {
        let verts: Vec<usize> = hofib::sset::delta_vertices(&s, x).iter().map(|&v| vmap[v]).collect();
        hofib::sset::delta_simplex(&t, &verts)
    })
}
