//! The declaration language: lexer, syntax tree and parser.
//!
//! ```text
//! sset NAME { SIMPLEX : dim N faces [F0, ..., FN] ; ... }
//! map NAME : SRC -> DST { SIMPLEX -> F ; ... }
//! monoid NAME { elements a, b, ...; unit a; mul { a.b = c; ... } }
//! category NAME { objects x, y; morphism f : x -> y; compose { g.f = h; ... } }
//! diagram NAME over CAT { F(OBJ) = SSET; act(OBJ,OBJ): ELEM -> MAP; ... }
//! ```
//!
//! A face expression `F` is a simplex name or `sK F`. `#` starts a comment.

use std::fmt;

use crate::error::{CliError, Result};

/// 1-based line and column.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Name {
    pub text: String,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FaceExpr {
    Simplex(Name),
    /// `s{index} inner`.
    Degenerate { index: usize, pos: Pos, inner: Box<FaceExpr> },
}

impl FaceExpr {
    pub fn pos(&self) -> Pos {
        match self {
            FaceExpr::Simplex(n) => n.pos,
            FaceExpr::Degenerate { pos, .. } => *pos,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexDecl {
    pub name: Name,
    pub dim: usize,
    pub faces: Vec<FaceExpr>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SsetDecl {
    pub name: Name,
    pub simplices: Vec<SimplexDecl>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapDecl {
    pub name: Name,
    pub source: Name,
    pub target: Name,
    pub images: Vec<(Name, FaceExpr)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidDecl {
    pub name: Name,
    pub elements: Vec<Name>,
    pub unit: Name,
    /// `a.b = c`.
    pub products: Vec<(Name, Name, Name)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CategoryDecl {
    pub name: Name,
    pub objects: Vec<Name>,
    /// `(name, source, target)`.
    pub morphisms: Vec<(Name, Name, Name)>,
    /// `g.f = h`.
    pub compositions: Vec<(Name, Name, Name)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActDecl {
    pub source: Name,
    pub target: Name,
    pub morphism: Name,
    pub map: Name,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramDecl {
    pub name: Name,
    pub over: Name,
    pub values: Vec<(Name, Name)>,
    pub actions: Vec<ActDecl>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Document {
    pub ssets: Vec<SsetDecl>,
    pub maps: Vec<MapDecl>,
    pub monoids: Vec<MonoidDecl>,
    pub categories: Vec<CategoryDecl>,
    pub diagrams: Vec<DiagramDecl>,
}

impl Document {
    /// Appends another document, rejecting names declared twice.
    pub fn merge(&mut self, other: Document) -> Result<()> {
        self.ssets.extend(other.ssets);
        self.maps.extend(other.maps);
        self.monoids.extend(other.monoids);
        self.categories.extend(other.categories);
        self.diagrams.extend(other.diagrams);
        self.check_unique()
    }

    fn check_unique(&self) -> Result<()> {
        fn unique<'a>(kind: &str, names: impl Iterator<Item = &'a Name>) -> Result<()> {
            let mut seen: std::collections::HashMap<&str, Pos> = Default::default();
            for n in names {
                if let Some(first) = seen.insert(&n.text, n.pos) {
                    return Err(CliError::Duplicate { kind: kind.into(), name: n.text.clone(), pos: n.pos, first });
                }
            }
            Ok(())
        }
        unique("sset", self.ssets.iter().map(|d| &d.name))?;
        unique("map", self.maps.iter().map(|d| &d.name))?;
        // monoids and categories share the namespace of `over`
        unique("category", self.monoids.iter().map(|d| &d.name).chain(self.categories.iter().map(|d| &d.name)))?;
        unique("diagram", self.diagrams.iter().map(|d| &d.name))?;
        for s in &self.ssets {
            unique(&format!("simplex in sset {}", s.name.text), s.simplices.iter().map(|x| &x.name))?;
        }
        for m in &self.monoids {
            unique(&format!("element of monoid {}", m.name.text), m.elements.iter())?;
        }
        for c in &self.categories {
            unique(&format!("object of category {}", c.name.text), c.objects.iter())?;
            unique(&format!("morphism of category {}", c.name.text), c.morphisms.iter().map(|m| &m.0))?;
        }
        Ok(())
    }
}

impl fmt::Display for FaceExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FaceExpr::Simplex(n) => write!(f, "{}", n.text),
            FaceExpr::Degenerate { index, inner, .. } => write!(f, "s{index} {inner}"),
        }
    }
}

fn join(names: &[Name]) -> String {
    names.iter().map(|n| n.text.as_str()).collect::<Vec<_>>().join(", ")
}

/// Canonical text; parsing it gives back the same declarations.
impl fmt::Display for Document {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.ssets {
            writeln!(f, "sset {} {{", s.name.text)?;
            for x in &s.simplices {
                write!(f, "  {} : dim {}", x.name.text, x.dim)?;
                if !x.faces.is_empty() {
                    let faces: Vec<String> = x.faces.iter().map(|e| e.to_string()).collect();
                    write!(f, " faces [{}]", faces.join(", "))?;
                }
                writeln!(f, ";")?;
            }
            writeln!(f, "}}")?;
        }
        for m in &self.maps {
            writeln!(f, "map {} : {} -> {} {{", m.name.text, m.source.text, m.target.text)?;
            for (s, e) in &m.images {
                writeln!(f, "  {} -> {e};", s.text)?;
            }
            writeln!(f, "}}")?;
        }
        for m in &self.monoids {
            writeln!(f, "monoid {} {{", m.name.text)?;
            writeln!(f, "  elements {};", join(&m.elements))?;
            writeln!(f, "  unit {};", m.unit.text)?;
            let products: Vec<String> = m.products.iter().map(|(a, b, c)| format!("{}.{} = {}", a.text, b.text, c.text)).collect();
            writeln!(f, "  mul {{ {} }}", products.join("; "))?;
            writeln!(f, "}}")?;
        }
        for c in &self.categories {
            writeln!(f, "category {} {{", c.name.text)?;
            writeln!(f, "  objects {};", join(&c.objects))?;
            for (m, s, t) in &c.morphisms {
                writeln!(f, "  morphism {} : {} -> {};", m.text, s.text, t.text)?;
            }
            let comps: Vec<String> = c.compositions.iter().map(|(a, b, h)| format!("{}.{} = {}", a.text, b.text, h.text)).collect();
            writeln!(f, "  compose {{ {} }}", comps.join("; "))?;
            writeln!(f, "}}")?;
        }
        for d in &self.diagrams {
            writeln!(f, "diagram {} over {} {{", d.name.text, d.over.text)?;
            for (o, s) in &d.values {
                writeln!(f, "  F({}) = {};", o.text, s.text)?;
            }
            for a in &d.actions {
                writeln!(f, "  act({},{}): {} -> {};", a.source.text, a.target.text, a.morphism.text, a.map.text)?;
            }
            writeln!(f, "}}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) => write!(f, "`{w}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '^' | '\'' | '*')
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
        } else if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                bump(&mut chars);
            }
        } else if is_word_char(c) {
            let mut w = String::new();
            while chars.peek().is_some_and(|&c| is_word_char(c)) {
                w.push(bump(&mut chars));
            }
            out.push((Tok::Word(w), pos));
        } else if c == '-' {
            bump(&mut chars);
            if chars.peek() == Some(&'>') {
                bump(&mut chars);
                out.push((Tok::Sym("->"), pos));
            } else {
                return Err(CliError::Syntax { pos, msg: "expected `->` after `-`".into() });
            }
        } else {
            let sym = match c {
                '{' => "{",
                '}' => "}",
                '[' => "[",
                ']' => "]",
                '(' => "(",
                ')' => ")",
                ':' => ":",
                ';' => ";",
                ',' => ",",
                '=' => "=",
                '.' => ".",
                other => return Err(CliError::Syntax { pos, msg: format!("unexpected character `{other}`") }),
            };
            bump(&mut chars);
            out.push((Tok::Sym(sym), pos));
        }
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn fail<T>(&self, want: &str) -> Result<T> {
        Err(CliError::Syntax { pos: self.pos(), msg: format!("expected {want}, found {}", self.peek()) })
    }

    fn next(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(t) if *t == s)
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Word(t) if t == w)
    }

    fn sym(&mut self, s: &str) -> Result<()> {
        if self.is_sym(s) {
            self.next();
            Ok(())
        } else {
            self.fail(&format!("`{s}`"))
        }
    }

    fn keyword(&mut self, w: &str) -> Result<()> {
        if self.is_word(w) {
            self.next();
            Ok(())
        } else {
            self.fail(&format!("`{w}`"))
        }
    }

    fn name(&mut self) -> Result<Name> {
        match self.peek().clone() {
            Tok::Word(text) => {
                let pos = self.next().1;
                Ok(Name { text, pos })
            }
            _ => self.fail("a name"),
        }
    }

    fn number(&mut self) -> Result<usize> {
        let pos = self.pos();
        let n = self.name()?;
        n.text.parse().map_err(|_| CliError::Syntax { pos, msg: format!("expected a number, found `{}`", n.text) })
    }

    /// `;`-separated items up to the closing brace; a trailing `;` is allowed.
    fn block<T>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T>) -> Result<Vec<T>> {
        self.sym("{")?;
        let mut out = Vec::new();
        loop {
            while self.is_sym(";") {
                self.next();
            }
            if self.is_sym("}") {
                self.next();
                return Ok(out);
            }
            out.push(item(self)?);
            if !self.is_sym(";") && !self.is_sym("}") {
                return self.fail("`;` or `}`");
            }
        }
    }

    fn list(&mut self) -> Result<Vec<Name>> {
        let mut out = vec![self.name()?];
        while self.is_sym(",") {
            self.next();
            out.push(self.name()?);
        }
        Ok(out)
    }

    fn face(&mut self) -> Result<FaceExpr> {
        let pos = self.pos();
        if let Tok::Word(w) = self.peek().clone() {
            // `sK F` is a degeneracy when another face expression follows
            let op = w.strip_prefix('s').and_then(|k| k.parse::<usize>().ok());
            let follows = matches!(self.toks.get(self.at + 1), Some((Tok::Word(_), _)));
            if let (Some(index), true) = (op, follows) {
                self.next();
                let inner = self.face()?;
                return Ok(FaceExpr::Degenerate { index, pos, inner: Box::new(inner) });
            }
        }
        Ok(FaceExpr::Simplex(self.name()?))
    }

    fn sset(&mut self) -> Result<SsetDecl> {
        let name = self.name()?;
        let simplices = self.block(|p| {
            let name = p.name()?;
            p.sym(":")?;
            p.keyword("dim")?;
            let dim = p.number()?;
            let mut faces = Vec::new();
            if p.is_word("faces") {
                p.next();
                p.sym("[")?;
                if !p.is_sym("]") {
                    faces.push(p.face()?);
                    while p.is_sym(",") {
                        p.next();
                        faces.push(p.face()?);
                    }
                }
                p.sym("]")?;
            }
            Ok(SimplexDecl { name, dim, faces })
        })?;
        Ok(SsetDecl { name, simplices })
    }

    fn map(&mut self) -> Result<MapDecl> {
        let name = self.name()?;
        self.sym(":")?;
        let source = self.name()?;
        self.sym("->")?;
        let target = self.name()?;
        let images = self.block(|p| {
            let s = p.name()?;
            p.sym("->")?;
            Ok((s, p.face()?))
        })?;
        Ok(MapDecl { name, source, target, images })
    }

    fn product(&mut self) -> Result<(Name, Name, Name)> {
        let a = self.name()?;
        self.sym(".")?;
        let b = self.name()?;
        self.sym("=")?;
        Ok((a, b, self.name()?))
    }

    fn monoid(&mut self) -> Result<MonoidDecl> {
        let name = self.name()?;
        let (mut elements, mut unit, mut products) = (None, None, Vec::new());
        let start = self.pos();
        self.block(|p| {
            let pos = p.pos();
            let key = p.name()?;
            match key.text.as_str() {
                "elements" => elements = Some(p.list()?),
                "unit" => unit = Some(p.name()?),
                "mul" => products.extend(p.block(Self::product)?),
                _ => return Err(CliError::Syntax { pos, msg: format!("expected `elements`, `unit` or `mul`, found `{}`", key.text) }),
            }
            Ok(())
        })?;
        let missing = |what: &str| CliError::Syntax { pos: start, msg: format!("monoid {} has no `{what}` clause", name.text) };
        let elements = elements.ok_or_else(|| missing("elements"))?;
        let unit = unit.ok_or_else(|| missing("unit"))?;
        Ok(MonoidDecl { name, elements, unit, products })
    }

    fn category(&mut self) -> Result<CategoryDecl> {
        let name = self.name()?;
        let (mut objects, mut morphisms, mut compositions) = (None, Vec::new(), Vec::new());
        let start = self.pos();
        self.block(|p| {
            let pos = p.pos();
            let key = p.name()?;
            match key.text.as_str() {
                "objects" => objects = Some(p.list()?),
                "morphism" => {
                    let m = p.name()?;
                    p.sym(":")?;
                    let s = p.name()?;
                    p.sym("->")?;
                    morphisms.push((m, s, p.name()?));
                }
                "compose" => compositions.extend(p.block(Self::product)?),
                _ => {
                    return Err(CliError::Syntax {
                        pos,
                        msg: format!("expected `objects`, `morphism` or `compose`, found `{}`", key.text),
                    })
                }
            }
            Ok(())
        })?;
        let objects = objects
            .ok_or_else(|| CliError::Syntax { pos: start, msg: format!("category {} has no `objects` clause", name.text) })?;
        Ok(CategoryDecl { name, objects, morphisms, compositions })
    }

    fn diagram(&mut self) -> Result<DiagramDecl> {
        let name = self.name()?;
        self.keyword("over")?;
        let over = self.name()?;
        let (mut values, mut actions) = (Vec::new(), Vec::new());
        self.block(|p| {
            if p.is_word("F") {
                p.next();
                p.sym("(")?;
                let obj = p.name()?;
                p.sym(")")?;
                p.sym("=")?;
                values.push((obj, p.name()?));
            } else if p.is_word("act") {
                p.next();
                p.sym("(")?;
                let source = p.name()?;
                p.sym(",")?;
                let target = p.name()?;
                p.sym(")")?;
                p.sym(":")?;
                let morphism = p.name()?;
                p.sym("->")?;
                let map = p.name()?;
                actions.push(ActDecl { source, target, morphism, map });
            } else {
                return p.fail("`F(...)` or `act(...)`");
            }
            Ok(())
        })?;
        Ok(DiagramDecl { name, over, values, actions })
    }
}

/// Parses a whole document.
pub fn parse(text: &str) -> Result<Document> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let mut doc = Document::default();
    loop {
        match p.peek().clone() {
            Tok::Eof => break,
            Tok::Word(w) => {
                p.next();
                match w.as_str() {
                    "sset" => doc.ssets.push(p.sset()?),
                    "map" => doc.maps.push(p.map()?),
                    "monoid" => doc.monoids.push(p.monoid()?),
                    "category" => doc.categories.push(p.category()?),
                    "diagram" => doc.diagrams.push(p.diagram()?),
                    _ => {
                        p.at -= 1;
                        return p.fail("`sset`, `map`, `monoid`, `category` or `diagram`");
                    }
                }
            }
            Tok::Sym(_) => return p.fail("a declaration"),
        }
    }
    doc.check_unique()?;
    Ok(doc)
}
