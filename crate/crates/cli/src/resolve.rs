//! Turns declarations into library objects, with built-in fallbacks.

use std::collections::HashMap;
use std::sync::Arc;

use hofib::borel::{Diagram, MonoidTable, Morphism, SimplicialCategory};
use hofib::sset::{
    binary_icosahedral, boundary, delta_simplex, delta_vertices, polygon, polygon_covering, presentation_complex_from_text,
    product, standard_simplex, suspension, Degeneracy, Generator, Violation, MAX_DIM,
};
use hofib::{SimplexRef, SimplicialMap, SimplicialSet};

use crate::dsl::{CategoryDecl, DiagramDecl, Document, FaceExpr, MapDecl, MonoidDecl, Name, Pos, SsetDecl};
use crate::error::{CliError, Result};

const BUILTIN_SSETS: &[&str] = &[
    "point",
    "circle",
    "delta<n>",
    "boundary<n>",
    "sphere<n>",
    "polygon<n>",
    "torus",
    "rp2",
    "binary_icosahedral",
    "suspended_acyclic",
];
const BUILTIN_MAPS: &[&str] = &[
    "collapse_circle_to_interval",
    "collapse_delta2_to_delta1",
    "covering_6_to_3",
    "cylinder_projection",
    "suspension_of_acyclic",
    "id_delta<n>",
];
const BUILTIN_MONOIDS: &[&str] = &["Z<n>", "idem", "trivial"];

fn numbered(name: &str, prefix: &str) -> Option<usize> {
    name.strip_prefix(prefix).and_then(|n| n.parse().ok())
}

/// Spaces available without a declaration.
pub fn builtin_sset(name: &str) -> Option<SimplicialSet> {
    let small = |n: usize| n <= 10;
    Some(match name {
        "point" => SimplicialSet::point(),
        "circle" => polygon(1),
        "torus" => {
            let c = Arc::new(polygon(1));
            (**product(c.clone(), c, 2).set()).clone()
        }
        "rp2" => presentation_complex_from_text(&["a"], &["a^2"]).ok()?,
        "binary_icosahedral" => binary_icosahedral(),
        "suspended_acyclic" => (*suspension(&Arc::new(binary_icosahedral())).ok()?.0).clone(),
        _ => {
            if let Some(n) = numbered(name, "delta").filter(|&n| small(n)) {
                standard_simplex(n)
            } else if let Some(n) = numbered(name, "boundary").filter(|&n| small(n)) {
                boundary(n).ok()?
            } else if let Some(n) = numbered(name, "sphere").filter(|&n| small(n + 1)) {
                boundary(n + 1).ok()?
            } else if let Some(n) = numbered(name, "polygon").filter(|&n| n > 0 && n <= 4096) {
                polygon(n)
            } else {
                return None;
            }
        }
    })
}

fn vertex_map(source: Arc<SimplicialSet>, target: Arc<SimplicialSet>, vmap: &[usize]) -> SimplicialMap {
    let (s, t) = (source.clone(), target.clone());
    let vmap = vmap.to_vec();
    SimplicialMap::from_fn(source, target, move |x| {
        let verts: Vec<usize> = delta_vertices(&s, x).iter().map(|&v| vmap[v]).collect();
        delta_simplex(&t, &verts)
    })
}

/// Maps available without a declaration.
pub fn builtin_map(name: &str) -> Option<SimplicialMap> {
    let d = |n: usize| Arc::new(standard_simplex(n));
    Some(match name {
        "collapse_circle_to_interval" => vertex_map(Arc::new(boundary(2).ok()?), d(1), &[0, 0, 1]),
        "collapse_delta2_to_delta1" => vertex_map(d(2), d(1), &[0, 0, 1]),
        "covering_6_to_3" => polygon_covering(Arc::new(polygon(6)), Arc::new(polygon(3))),
        "cylinder_projection" => product(d(1), Arc::new(boundary(2).ok()?), 2).projection(0),
        "suspension_of_acyclic" => suspension(&Arc::new(binary_icosahedral())).ok()?.1,
        _ => {
            let n = numbered(name, "id_delta").filter(|&n| n <= 10)?;
            SimplicialMap::identity(d(n))
        }
    })
}

/// Monoids available without a declaration.
pub fn builtin_monoid(name: &str) -> Option<MonoidTable> {
    match name {
        "idem" => Some(MonoidTable::idempotent()),
        "trivial" => Some(MonoidTable::trivial()),
        _ => numbered(name, "Z").filter(|&n| (1..=64).contains(&n)).map(MonoidTable::cyclic),
    }
}

/// Up to three candidates close to `name`.
pub fn suggest<'a>(name: &str, candidates: impl IntoIterator<Item = &'a str>) -> Vec<String> {
    let mut scored: Vec<(usize, &str)> = candidates
        .into_iter()
        .map(|c| {
            let stem = c.trim_end_matches("<n>");
            let d = if c.ends_with("<n>") && name.starts_with(stem) {
                0
            } else {
                strsim::levenshtein(&name.to_lowercase(), &c.to_lowercase())
            };
            (d, c)
        })
        .filter(|(d, c)| *d <= 2.max(c.len() / 3))
        .collect();
    scored.sort();
    scored.dedup();
    scored.into_iter().take(3).map(|(_, c)| c.to_string()).collect()
}

/// What a name refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Sset,
    Map,
    Category,
    Diagram,
}

impl Kind {
    pub fn noun(self) -> &'static str {
        match self {
            Kind::Sset => "sset",
            Kind::Map => "map",
            Kind::Category => "monoid or category",
            Kind::Diagram => "diagram",
        }
    }
}

/// Resolved declarations plus the built-in library.
#[derive(Clone, Debug, Default)]
pub struct Env {
    pub doc: Document,
}

fn invalid(pos: Pos, msg: impl Into<String>) -> CliError {
    CliError::Invalid { pos, msg: msg.into() }
}

/// Generator names, by label text.
fn simplex_index(x: &SimplicialSet) -> HashMap<String, SimplexRef> {
    x.generators().map(|g| (x.label(g).to_string(), g)).collect()
}

fn resolve_face(expr: &FaceExpr, index: &HashMap<String, SimplexRef>, owner: &str) -> Result<SimplexRef> {
    match expr {
        FaceExpr::Simplex(n) => index.get(&n.text).copied().ok_or_else(|| CliError::Unresolved {
            kind: format!("simplex of {owner}"),
            name: n.text.clone(),
            pos: Some(n.pos),
            suggestions: suggest(&n.text, index.keys().map(String::as_str)),
        }),
        FaceExpr::Degenerate { index: k, pos, inner } => {
            let x = resolve_face(inner, index, owner)?;
            if *k > x.dim() {
                return Err(invalid(*pos, format!("s{k} does not act on a {}-simplex", x.dim())));
            }
            if x.dim() + 1 > MAX_DIM {
                return Err(invalid(*pos, format!("dimension {} is beyond the supported maximum", x.dim() + 1)));
            }
            Ok(x.degenerate(Degeneracy::elementary(*k)))
        }
    }
}

/// Renders a validation problem using generator names.
pub fn describe_violation(x: &SimplicialSet, v: &Violation) -> String {
    let (d, g) = match v {
        Violation::FaceCount { simplex, .. }
        | Violation::Dangling { simplex, .. }
        | Violation::FaceDimension { simplex, .. }
        | Violation::Identity { simplex, .. } => *simplex,
    };
    let name = x.level(d).get(g).map(|gen| gen.label.to_string()).unwrap_or_default();
    format!("{name}: {v}")
}

impl Env {
    pub fn new(doc: Document) -> Self {
        Env { doc }
    }

    fn names(&self, kind: Kind) -> Vec<&str> {
        let d = &self.doc;
        let mut out: Vec<&str> = match kind {
            Kind::Sset => d.ssets.iter().map(|s| s.name.text.as_str()).chain(BUILTIN_SSETS.iter().copied()).collect(),
            Kind::Map => d.maps.iter().map(|s| s.name.text.as_str()).chain(BUILTIN_MAPS.iter().copied()).collect(),
            Kind::Category => d
                .monoids
                .iter()
                .map(|s| s.name.text.as_str())
                .chain(d.categories.iter().map(|c| c.name.text.as_str()))
                .chain(BUILTIN_MONOIDS.iter().copied())
                .collect(),
            Kind::Diagram => d.diagrams.iter().map(|s| s.name.text.as_str()).collect(),
        };
        out.sort_unstable();
        out
    }

    fn unresolved(&self, kind: Kind, name: &str, pos: Option<Pos>) -> CliError {
        CliError::Unresolved { kind: kind.noun().into(), name: name.into(), pos, suggestions: suggest(name, self.names(kind)) }
    }

    /// Which kinds the name resolves to, in dispatch order.
    pub fn kinds_of(&self, name: &str) -> Vec<Kind> {
        let d = &self.doc;
        let mut out = Vec::new();
        if d.ssets.iter().any(|s| s.name.text == name) || builtin_sset(name).is_some() {
            out.push(Kind::Sset);
        }
        if d.maps.iter().any(|s| s.name.text == name) || builtin_map(name).is_some() {
            out.push(Kind::Map);
        }
        if d.monoids.iter().any(|s| s.name.text == name)
            || d.categories.iter().any(|s| s.name.text == name)
            || builtin_monoid(name).is_some()
        {
            out.push(Kind::Category);
        }
        if d.diagrams.iter().any(|s| s.name.text == name) {
            out.push(Kind::Diagram);
        }
        out
    }

    /// Suggestions across every kind, for names that resolve to nothing.
    pub fn unknown(&self, name: &str, wanted: &[Kind]) -> CliError {
        let all: Vec<&str> = wanted.iter().flat_map(|k| self.names(*k)).collect();
        let noun = wanted.iter().map(|k| k.noun()).collect::<Vec<_>>().join(" or ");
        CliError::Unresolved { kind: noun, name: name.into(), pos: None, suggestions: suggest(name, all) }
    }

    /// Builds a declared set without validating it.
    pub fn build_sset(decl: &SsetDecl) -> Result<SimplicialSet> {
        let mut index = HashMap::new();
        let mut levels: Vec<Vec<Generator>> = Vec::new();
        for s in &decl.simplices {
            let want = if s.dim == 0 { 0 } else { s.dim + 1 };
            if s.faces.len() != want {
                return Err(invalid(
                    s.name.pos,
                    format!("simplex {} of dimension {} needs {want} faces, found {}", s.name.text, s.dim, s.faces.len()),
                ));
            }
            if s.dim > MAX_DIM {
                return Err(invalid(s.name.pos, format!("dimension {} is beyond the supported maximum", s.dim)));
            }
            while levels.len() <= s.dim {
                levels.push(Vec::new());
            }
            index.insert(s.name.text.clone(), SimplexRef::generator(s.dim, levels[s.dim].len()));
            levels[s.dim].push(Generator { label: hofib::sset::Label::name(s.name.text.clone()), faces: Vec::new() });
        }
        let owner = format!("sset {}", decl.name.text);
        for s in &decl.simplices {
            let mut faces = Vec::with_capacity(s.faces.len());
            for (i, f) in s.faces.iter().enumerate() {
                let r = resolve_face(f, &index, &owner)?;
                if r.dim() + 1 != s.dim {
                    return Err(invalid(
                        f.pos(),
                        format!("face d{i} of {} must have dimension {}, found {}", s.name.text, s.dim - 1, r.dim()),
                    ));
                }
                faces.push(r);
            }
            let me = index[&s.name.text];
            levels[me.dim()][me.gen()].faces = faces;
        }
        Ok(SimplicialSet::from_levels_unchecked(levels, None))
    }

    /// A validated simplicial set.
    pub fn sset(&self, name: &str, pos: Option<Pos>) -> Result<Arc<SimplicialSet>> {
        if let Some(decl) = self.doc.ssets.iter().find(|s| s.name.text == name) {
            let x = Self::build_sset(decl)?;
            if let Some(v) = x.validate().violations.first() {
                return Err(invalid(decl.name.pos, format!("sset {name} is not simplicial: {}", describe_violation(&x, v))));
            }
            return Ok(Arc::new(x));
        }
        builtin_sset(name).map(Arc::new).ok_or_else(|| self.unresolved(Kind::Sset, name, pos))
    }

    /// Builds a declared map; returns its simplicial-law violations alongside.
    pub fn build_map(&self, decl: &MapDecl) -> Result<(SimplicialMap, Vec<String>)> {
        let source = self.sset(&decl.source.text, Some(decl.source.pos))?;
        let target = self.sset(&decl.target.text, Some(decl.target.pos))?;
        let src_index = simplex_index(&source);
        let tgt_index = simplex_index(&target);
        let mut images: Vec<Vec<Option<SimplexRef>>> = (0..=source.max_dim()).map(|d| vec![None; source.count(d)]).collect();
        let owner = format!("sset {}", decl.target.text);
        for (s, f) in &decl.images {
            let Some(&g) = src_index.get(&s.text) else {
                return Err(CliError::Unresolved {
                    kind: format!("simplex of sset {}", decl.source.text),
                    name: s.text.clone(),
                    pos: Some(s.pos),
                    suggestions: suggest(&s.text, src_index.keys().map(String::as_str)),
                });
            };
            let y = resolve_face(f, &tgt_index, &owner)?;
            if y.dim() != g.dim() {
                return Err(invalid(f.pos(), format!("{} has dimension {} but its image has dimension {}", s.text, g.dim(), y.dim())));
            }
            if images[g.dim()][g.gen()].replace(y).is_some() {
                return Err(invalid(s.pos, format!("{} is assigned twice", s.text)));
            }
        }
        let mut missing = Vec::new();
        let mut full = Vec::new();
        for (d, level) in images.into_iter().enumerate() {
            full.push(
                level
                    .into_iter()
                    .enumerate()
                    .map(|(g, y)| {
                        y.unwrap_or_else(|| {
                            missing.push(source.label(SimplexRef::generator(d, g)).to_string());
                            SimplexRef::generator(0, 0)
                        })
                    })
                    .collect(),
            );
        }
        if !missing.is_empty() {
            return Err(invalid(decl.name.pos, format!("map {} gives no image for {}", decl.name.text, missing.join(", "))));
        }
        let map = SimplicialMap::new_unchecked(source, target, full);
        let problems = map.violations();
        Ok((map, problems))
    }

    /// A map checked to commute with faces.
    pub fn map(&self, name: &str, pos: Option<Pos>) -> Result<SimplicialMap> {
        if let Some(decl) = self.doc.maps.iter().find(|s| s.name.text == name) {
            let (map, problems) = self.build_map(decl)?;
            if let Some(p) = problems.first() {
                return Err(invalid(decl.name.pos, format!("map {name} is not simplicial: {p}")));
            }
            return Ok(map);
        }
        builtin_map(name).ok_or_else(|| self.unresolved(Kind::Map, name, pos))
    }

    pub fn monoid_table(decl: &MonoidDecl) -> Result<MonoidTable> {
        let index: HashMap<&str, usize> = decl.elements.iter().enumerate().map(|(i, e)| (e.text.as_str(), i)).collect();
        let elem = |n: &Name| {
            index.get(n.text.as_str()).copied().ok_or_else(|| CliError::Unresolved {
                kind: format!("element of monoid {}", decl.name.text),
                name: n.text.clone(),
                pos: Some(n.pos),
                suggestions: suggest(&n.text, index.keys().copied()),
            })
        };
        let unit = elem(&decl.unit)?;
        let n = decl.elements.len();
        let mut mul = vec![vec![None; n]; n];
        for a in 0..n {
            mul[unit][a] = Some(a);
            mul[a][unit] = Some(a);
        }
        for (a, b, c) in &decl.products {
            let (ia, ib, ic) = (elem(a)?, elem(b)?, elem(c)?);
            if let Some(old) = mul[ia][ib].filter(|&o| o != ic) {
                return Err(invalid(a.pos, format!("{}.{} is already {}", a.text, b.text, decl.elements[old].text)));
            }
            mul[ia][ib] = Some(ic);
        }
        let mut missing = Vec::new();
        for (a, row) in mul.iter().enumerate() {
            for (b, v) in row.iter().enumerate() {
                if v.is_none() {
                    missing.push(format!("{}.{}", decl.elements[a].text, decl.elements[b].text));
                }
            }
        }
        if !missing.is_empty() {
            return Err(invalid(decl.name.pos, format!("monoid {} has no product for {}", decl.name.text, missing.join(", "))));
        }
        Ok(MonoidTable {
            elements: decl.elements.iter().map(|e| e.text.clone()).collect(),
            unit,
            mul: mul.into_iter().map(|r| r.into_iter().map(Option::unwrap).collect()).collect(),
        })
    }

    pub fn build_category(decl: &CategoryDecl) -> Result<SimplicialCategory> {
        let objs: HashMap<&str, usize> = decl.objects.iter().enumerate().map(|(i, o)| (o.text.as_str(), i)).collect();
        let obj = |n: &Name| {
            objs.get(n.text.as_str()).copied().ok_or_else(|| CliError::Unresolved {
                kind: format!("object of category {}", decl.name.text),
                name: n.text.clone(),
                pos: Some(n.pos),
                suggestions: suggest(&n.text, objs.keys().copied()),
            })
        };
        let k = decl.objects.len();
        let mut names: Vec<Vec<Vec<String>>> = vec![vec![Vec::new(); k]; k];
        for (i, o) in decl.objects.iter().enumerate() {
            names[i][i].push(format!("id_{}", o.text));
        }
        // name -> (source, target, index)
        let mut where_: HashMap<String, (usize, usize, usize)> = HashMap::new();
        for (i, o) in decl.objects.iter().enumerate() {
            where_.insert(format!("id_{}", o.text), (i, i, 0));
        }
        for (m, s, t) in &decl.morphisms {
            let (i, j) = (obj(s)?, obj(t)?);
            if where_.contains_key(&m.text) {
                return Err(invalid(m.pos, format!("morphism name {} is taken", m.text)));
            }
            where_.insert(m.text.clone(), (i, j, names[i][j].len()));
            names[i][j].push(m.text.clone());
        }
        let lookup = |n: &Name| {
            where_.get(&n.text).copied().ok_or_else(|| CliError::Unresolved {
                kind: format!("morphism of category {}", decl.name.text),
                name: n.text.clone(),
                pos: Some(n.pos),
                suggestions: suggest(&n.text, where_.keys().map(String::as_str)),
            })
        };
        let mut table: HashMap<((usize, usize, usize), (usize, usize, usize)), usize> = HashMap::new();
        for (g, f, h) in &decl.compositions {
            let (gm, fm, hm) = (lookup(g)?, lookup(f)?, lookup(h)?);
            if fm.1 != gm.0 {
                return Err(invalid(g.pos, format!("{} and {} are not composable", g.text, f.text)));
            }
            if (hm.0, hm.1) != (fm.0, gm.1) {
                return Err(invalid(h.pos, format!("{} does not run from the source of {} to the target of {}", h.text, f.text, g.text)));
            }
            table.insert((gm, fm), hm.2);
        }
        let mut missing = Vec::new();
        let compose = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        (0..k)
                            .map(|l| {
                                (0..names[j][l].len())
                                    .map(|g| {
                                        (0..names[i][j].len())
                                            .map(|f| {
                                                if i == j && f == 0 {
                                                    g
                                                } else if j == l && g == 0 {
                                                    f
                                                } else {
                                                    table.get(&((j, l, g), (i, j, f))).copied().unwrap_or_else(|| {
                                                        missing.push(format!("{}.{}", names[j][l][g], names[i][j][f]));
                                                        0
                                                    })
                                                }
                                            })
                                            .collect()
                                    })
                                    .collect()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        if !missing.is_empty() {
            return Err(invalid(decl.name.pos, format!("category {} has no composite for {}", decl.name.text, missing.join(", "))));
        }
        let objects = decl.objects.iter().map(|o| o.text.clone()).collect();
        SimplicialCategory::new(objects, names, vec![0; k], compose).map_err(|e| invalid(decl.name.pos, e.to_string()))
    }

    /// A category, from a monoid or category declaration or a built-in monoid.
    pub fn category(&self, name: &str, pos: Option<Pos>) -> Result<SimplicialCategory> {
        if let Some(decl) = self.doc.monoids.iter().find(|s| s.name.text == name) {
            let table = Self::monoid_table(decl)?;
            return SimplicialCategory::from_monoid(&table).map_err(|e| invalid(decl.name.pos, e.to_string()));
        }
        if let Some(decl) = self.doc.categories.iter().find(|s| s.name.text == name) {
            return Self::build_category(decl);
        }
        let table = builtin_monoid(name).ok_or_else(|| self.unresolved(Kind::Category, name, pos))?;
        Ok(SimplicialCategory::from_monoid(&table)?)
    }

    pub fn build_diagram(&self, decl: &DiagramDecl) -> Result<(SimplicialCategory, Diagram)> {
        let cat = self.category(&decl.over.text, Some(decl.over.pos))?;
        let obj = |n: &Name| {
            cat.object(&n.text).ok_or_else(|| CliError::Unresolved {
                kind: format!("object of {}", decl.over.text),
                name: n.text.clone(),
                pos: Some(n.pos),
                suggestions: suggest(&n.text, cat.objects().iter().map(String::as_str)),
            })
        };
        let k = cat.object_count();
        let mut values: Vec<Option<Arc<SimplicialSet>>> = vec![None; k];
        for (o, s) in &decl.values {
            let i = obj(o)?;
            if values[i].replace(self.sset(&s.text, Some(s.pos))?).is_some() {
                return Err(invalid(o.pos, format!("F({}) is given twice", o.text)));
            }
        }
        let mut values_full = Vec::with_capacity(k);
        for (i, v) in values.into_iter().enumerate() {
            values_full.push(
                v.ok_or_else(|| invalid(decl.name.pos, format!("diagram {} gives no value F({})", decl.name.text, cat.objects()[i])))?,
            );
        }
        let values = values_full;
        let mut actions: Vec<Vec<Vec<Option<SimplicialMap>>>> =
            (0..k).map(|i| (0..k).map(|j| vec![None; cat.hom_size(i, j)]).collect()).collect();
        for a in &decl.actions {
            let (i, j) = (obj(&a.source)?, obj(&a.target)?);
            let f = cat.morphism(i, j, &a.morphism.text).ok_or_else(|| CliError::Unresolved {
                kind: format!("morphism {} -> {} of {}", a.source.text, a.target.text, decl.over.text),
                name: a.morphism.text.clone(),
                pos: Some(a.morphism.pos),
                suggestions: suggest(&a.morphism.text, (0..cat.hom_size(i, j)).map(|x| cat.name(Morphism { source: i, target: j, index: x }))),
            })?;
            let map = if a.map.text == "id" && !self.doc.maps.iter().any(|m| m.name.text == "id") {
                if values[i] != values[j] {
                    return Err(invalid(a.map.pos, "`id` needs F of both ends to agree"));
                }
                SimplicialMap::identity(values[j].clone())
            } else {
                self.map(&a.map.text, Some(a.map.pos))?
            };
            if **map.source() != *values[j] || **map.target() != *values[i] {
                return Err(invalid(
                    a.map.pos,
                    format!("{} must run from F({}) to F({})", a.map.text, a.target.text, a.source.text),
                ));
            }
            if actions[i][j][f.index].replace(map).is_some() {
                return Err(invalid(a.morphism.pos, format!("action of {} is given twice", a.morphism.text)));
            }
        }
        let mut full = Vec::with_capacity(k);
        for (i, row) in actions.into_iter().enumerate() {
            let mut r = Vec::with_capacity(k);
            for (j, maps) in row.into_iter().enumerate() {
                let mut m = Vec::with_capacity(maps.len());
                for (x, map) in maps.into_iter().enumerate() {
                    let f = Morphism { source: i, target: j, index: x };
                    m.push(match map {
                        Some(map) => map,
                        None if f == cat.identity(i) => SimplicialMap::identity(values[i].clone()),
                        None => {
                            return Err(invalid(decl.name.pos, format!("diagram {} gives no action for {}", decl.name.text, cat.describe(f))))
                        }
                    });
                }
                r.push(m);
            }
            full.push(r);
        }
        let d = Diagram::new(&cat, values, full).map_err(|e| invalid(decl.name.pos, e.to_string()))?;
        Ok((cat, d))
    }

    pub fn diagram(&self, name: &str, pos: Option<Pos>) -> Result<(SimplicialCategory, Diagram)> {
        match self.doc.diagrams.iter().find(|s| s.name.text == name) {
            Some(decl) => self.build_diagram(decl),
            None => Err(self.unresolved(Kind::Diagram, name, pos)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;

    fn env(text: &str) -> Env {
        Env::new(parse(text).unwrap())
    }

    #[test]
    fn circle_file() {
        let e = env("sset circle { v : dim 0; e : dim 1 faces [v, v] }");
        let c = e.sset("circle", None).unwrap();
        assert_eq!(c.counts(), vec![1, 1]);
    }

    #[test]
    fn degenerate_face_lowers_to_normal_form() {
        let e = env("sset cone { v : dim 0; w : dim 0; a : dim 1 faces [w, v]; t : dim 2 faces [s0 w, a, a] }");
        let x = e.sset("cone", None).unwrap();
        let t = x.generator(2, 0);
        assert!(t.faces[0].is_degenerate());
        assert_eq!(t.faces[0].core(), x.find_name("w").unwrap());
    }

    #[test]
    fn unknown_face_suggests() {
        let e = env("sset c { vert : dim 0; e : dim 1 faces [vert, vrt] }");
        match e.sset("c", None).unwrap_err() {
            CliError::Unresolved { suggestions, pos, .. } => {
                assert_eq!(suggestions, vec!["vert".to_string()]);
                assert_eq!(pos, Some(Pos { line: 1, col: 47 }));
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn unknown_target_suggests_builtins() {
        let e = Env::default();
        let err = e.unknown("cirle", &[Kind::Sset]);
        assert!(err.to_string().contains("`circle`"), "{err}");
    }

    #[test]
    fn swapped_faces_fail_validation() {
        let e = env("sset bad { a : dim 0; b : dim 0; c : dim 0; x : dim 1 faces [b, a]; y : dim 1 faces [c, b]; z : dim 1 faces [c, a]; t : dim 2 faces [x, z, y] }");
        let err = e.sset("bad", None).unwrap_err();
        assert!(err.to_string().contains("not simplicial"), "{err}");
    }

    #[test]
    fn monoid_table_needs_every_product() {
        let e = env("monoid M { elements 1, a, b; unit 1; mul { a.a = a } }");
        let err = e.category("M", None).unwrap_err();
        assert!(err.to_string().contains("a.b"), "{err}");
    }

    #[test]
    fn declared_category() {
        let e = env("category C { objects x, y; morphism f : x -> y }");
        let c = e.category("C", None).unwrap();
        assert_eq!(c.object_count(), 2);
        assert_eq!(c.hom_size(0, 1), 1);
        assert_eq!(c.hom_size(1, 0), 0);
    }

    #[test]
    fn diagram_over_builtin_monoid() {
        let e = env(
            "sset pts { p : dim 0; q : dim 0 }\n\
             map swap : pts -> pts { p -> q; q -> p }\n\
             diagram D over Z2 { F(*) = pts; act(*,*): t -> swap }",
        );
        let (cat, d) = e.diagram("D", None).unwrap();
        assert!(d.law_violations(&cat).is_empty());
    }
}
