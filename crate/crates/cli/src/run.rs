//! Command dispatch: each command drives one pipeline and fills a report.

use std::time::Instant;

use hofib::borel::{
    borel_total, classifying_space, group_completion_check, restriction_diagram, telescope_diagram, Diagram,
    GroupCompletionReport, SimplicialCategory,
};
use hofib::fibration::Fibration;
use hofib::homology::{homology_groups, is_homology_iso_with, Coefficients, IsoCertificate};
use hofib::subdivision::{sd, sd_over_simplex, SubdividedMap};
use hofib::SimplicialSet;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, Result};
use crate::report::Report;
use crate::resolve::{builtin_map, builtin_monoid, builtin_sset, describe_violation, Env, Kind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Homology,
    CheckWeakfib,
    Subdivide,
    StarLemma,
    Barycenter,
    Borel,
    Classify,
    GroupCompletion,
    Validate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Homology => "homology",
            Command::CheckWeakfib => "check-weakfib",
            Command::Subdivide => "subdivide",
            Command::StarLemma => "star-lemma",
            Command::Barycenter => "barycenter",
            Command::Borel => "borel",
            Command::Classify => "classify",
            Command::GroupCompletion => "group-completion",
            Command::Validate => "validate",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Flags {
    /// Truncation bound.
    pub max_dim: usize,
    pub coefficients: Coefficients,
    pub deep_ops: bool,
    pub seed: u64,
    pub timing: bool,
    /// Star-lemma face as a vertex list.
    pub face: Option<Vec<usize>>,
    /// Star-lemma: check this many faces chosen with `seed`.
    pub samples: Option<usize>,
    /// Group completion: telescope along this element.
    pub telescope: Option<String>,
    pub stages: usize,
    /// Object whose representable diagram is used when a category is given.
    pub object: Option<String>,
}

impl Default for Flags {
    fn default() -> Self {
        Flags {
            max_dim: 4,
            coefficients: Coefficients::Integers,
            deep_ops: false,
            seed: 0,
            timing: false,
            face: None,
            samples: None,
            telescope: None,
            stages: 2,
            object: None,
        }
    }
}

/// `Z`, `Z2`, `Z/3`, `F5`, ...
pub fn parse_coefficients(text: &str) -> std::result::Result<Coefficients, String> {
    let t = text.trim();
    if t == "Z" {
        return Ok(Coefficients::Integers);
    }
    let digits = t.strip_prefix("Z/").or_else(|| t.strip_prefix('Z')).or_else(|| t.strip_prefix('F'));
    let p: u64 = digits.and_then(|d| d.parse().ok()).ok_or_else(|| format!("unknown coefficients `{text}`"))?;
    if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
        return Err(format!("{p} is not a prime"));
    }
    Ok(Coefficients::Mod(p))
}

fn coeff_name(c: Coefficients) -> String {
    match c {
        Coefficients::Integers => "Z".into(),
        Coefficients::Mod(p) => format!("Z{p}"),
    }
}

fn iso_witness(what: &str, cert: &IsoCertificate) -> Vec<String> {
    cert.failure().map(|f| vec![format!("{what}: {}", f.describe())]).unwrap_or_default()
}

fn need(target: Option<&str>, command: Command) -> Result<&str> {
    target.ok_or_else(|| CliError::Usage(format!("{} needs a target name", command.name())))
}

fn resolve_kind(env: &Env, name: &str, allowed: &[Kind]) -> Result<Kind> {
    env.kinds_of(name).into_iter().find(|k| allowed.contains(k)).ok_or_else(|| env.unknown(name, allowed))
}

/// Runs one command against the loaded declarations.
pub fn run(command: Command, target: Option<&str>, env: &Env, flags: &Flags) -> Result<Report> {
    let start = Instant::now();
    let mut report = Report::new(command.name());
    if let Some(t) = target {
        report.params.insert("target".into(), t.into());
    }
    report.params.insert("max_dim".into(), flags.max_dim.to_string());
    report.params.insert("coefficients".into(), coeff_name(flags.coefficients));
    if flags.max_dim == 0 && command != Command::Validate {
        return Err(CliError::Usage("--max-dim must be at least 1".into()));
    }
    match command {
        Command::Homology => homology(&mut report, env, need(target, command)?, flags)?,
        Command::CheckWeakfib => check_weakfib(&mut report, env, need(target, command)?, flags)?,
        Command::Subdivide => subdivide(&mut report, env, need(target, command)?, flags)?,
        Command::StarLemma => star_lemma(&mut report, env, need(target, command)?, flags)?,
        Command::Barycenter => barycenter(&mut report, env, need(target, command)?, flags)?,
        Command::Borel => borel(&mut report, env, need(target, command)?, flags)?,
        Command::Classify => classify(&mut report, env, need(target, command)?, flags)?,
        Command::GroupCompletion => group_completion(&mut report, env, need(target, command)?, flags)?,
        Command::Validate => validate(&mut report, env, target)?,
    }
    if flags.timing {
        report.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

fn homology(report: &mut Report, env: &Env, name: &str, flags: &Flags) -> Result<()> {
    let x = env.sset(name, None)?;
    let up_to = flags.max_dim;
    report.valid_up_to = Some(x.valid_up_to().map_or(up_to, |v| v.min(up_to)));
    report.table(name, &homology_groups(&x, up_to, flags.coefficients));
    Ok(())
}

fn check_weakfib(report: &mut Report, env: &Env, name: &str, flags: &Flags) -> Result<()> {
    let f = env.map(name, None)?;
    if flags.deep_ops {
        report.params.insert("deep_ops".into(), "true".into());
    }
    let up_to = flags.max_dim - 1;
    report.valid_up_to = Some(up_to);
    let fib = Fibration::with_coefficients(f, flags.max_dim, flags.coefficients);
    let weak = fib.weak_check(up_to, flags.deep_ops)?;
    report.params.insert("pairs".into(), weak.pairs.len().to_string());
    report.check("weak fibration", weak.failures().map(|p| p.witness()).collect());
    Ok(())
}

fn over_simplex(env: &Env, name: &str) -> Result<SubdividedMap> {
    let f = env.map(name, None)?;
    sd_over_simplex(&f).map_err(|e| CliError::Usage(format!("{name}: {e}; this command needs a map onto a standard simplex")))
}

fn subdivide(report: &mut Report, env: &Env, name: &str, flags: &Flags) -> Result<()> {
    let up_to = flags.max_dim - 1;
    report.valid_up_to = Some(up_to);
    let c = flags.coefficients;
    match resolve_kind(env, name, &[Kind::Sset, Kind::Map])? {
        Kind::Sset => {
            let x = env.sset(name, None)?;
            let s = sd(x.clone());
            report.params.insert("counts".into(), format!("{:?}", s.set().counts()));
            report.table(name, &homology_groups(&x, up_to, c));
            report.table(&format!("Sd {name}"), &homology_groups(s.set(), up_to, c));
            let v = s.set().validate();
            report.check("subdivision validates", v.violations.iter().map(|v| describe_violation(s.set(), v)).collect());
            let cert = is_homology_iso_with(&s.last_vertex(), up_to, c);
            report.check("last vertex map is a homology equivalence", iso_witness("last vertex map", &cert));
        }
        _ => {
            let sf = over_simplex(env, name)?;
            report.params.insert("counts".into(), format!("{:?}", sf.source().counts()));
            report.table(&format!("Sd {name}"), &homology_groups(sf.source(), up_to, c));
            let cube = match sf.cube_decomposition() {
                Ok(cube) if cube.comparison.is_isomorphism() => Vec::new(),
                Ok(_) => vec!["colimit comparison is not an isomorphism".to_string()],
                Err(e) => vec![e.to_string()],
            };
            report.check("cube decomposition", cube);
        }
    }
    Ok(())
}

fn face_mask(face: &[usize], n: usize) -> Result<u32> {
    let mut mask = 0u32;
    for &v in face {
        if v > n {
            return Err(CliError::Usage(format!("vertex {v} is not in Δ[{n}]")));
        }
        mask |= 1 << v;
    }
    if mask == 0 {
        return Err(CliError::Usage("--face needs at least one vertex".into()));
    }
    Ok(mask)
}

fn mask_name(mask: u32) -> String {
    let vs: Vec<String> = (0..32).filter(|v| mask & (1 << v) != 0).map(|v| v.to_string()).collect();
    format!("{{{}}}", vs.join(","))
}

fn star_lemma(report: &mut Report, env: &Env, name: &str, flags: &Flags) -> Result<()> {
    let sf = over_simplex(env, name)?;
    let up_to = flags.max_dim - 1;
    report.valid_up_to = Some(up_to);
    let all: Vec<u32> = (1..(1u32 << (sf.n + 1))).collect();
    let faces = match (&flags.face, flags.samples) {
        (Some(f), _) => vec![face_mask(f, sf.n)?],
        (None, Some(k)) => {
            report.params.insert("samples".into(), k.to_string());
            report.params.insert("seed".into(), flags.seed.to_string());
            let mut rng = ChaCha8Rng::seed_from_u64(flags.seed);
            let mut picked: Vec<u32> =
                rand::seq::index::sample(&mut rng, all.len(), k.min(all.len())).into_iter().map(|i| all[i]).collect();
            picked.sort_unstable();
            picked
        }
        (None, None) => all,
    };
    for alpha in faces {
        let label = format!("star {}", mask_name(alpha));
        if sf.est(alpha).set.is_empty() {
            report.check(label, Vec::new());
            continue;
        }
        let lemma = sf.star_retraction(alpha)?;
        let c = lemma.check();
        let mut why = Vec::new();
        for (ok, what) in [
            (c.maps_simplicial, "inclusion, retraction and homotopy are simplicial"),
            (c.retraction_is_left_inverse, "r . i = id"),
            (c.end_zero, "H(-, 0) = i . r"),
            (c.end_one, "H(-, 1) = id"),
        ] {
            if !ok {
                why.push(format!("fails: {what}"));
            }
        }
        why.extend(iso_witness("preimage -> star", &is_homology_iso_with(&lemma.inclusion, up_to, flags.coefficients)));
        report.check(label, why);
    }
    Ok(())
}

fn barycenter(report: &mut Report, env: &Env, name: &str, flags: &Flags) -> Result<()> {
    let sf = over_simplex(env, name)?;
    let up_to = flags.max_dim - 1;
    report.valid_up_to = Some(up_to);
    let c = flags.coefficients;
    let pre = sf.barycenter_preimage();
    report.params.insert("preimage_counts".into(), format!("{:?}", pre.set.counts()));
    report.table(&format!("{name} total"), &homology_groups(&sf.f.source().clone(), up_to, c));
    report.table("barycenter preimage", &homology_groups(&pre.set, up_to, c));
    let weak = Fibration::with_coefficients(sf.f.clone(), flags.max_dim, c).weak_check(up_to, flags.deep_ops)?;
    report.check("weak fibration", weak.failures().map(|p| p.witness()).collect());
    let to_total = pre.inclusion.then(&sf.sd.last_vertex());
    report.check("barycenter preimage -> total", iso_witness("barycenter preimage -> total", &is_homology_iso_with(&to_total, up_to, c)));
    Ok(())
}

/// A diagram from a diagram name, or the representable diagram of a category.
fn diagram_for(env: &Env, name: &str, flags: &Flags, report: &mut Report) -> Result<(SimplicialCategory, Diagram)> {
    match resolve_kind(env, name, &[Kind::Diagram, Kind::Category])? {
        Kind::Diagram => env.diagram(name, None),
        _ => {
            let cat = env.category(name, None)?;
            let j = match &flags.object {
                Some(o) => {
                    report.params.insert("object".into(), o.clone());
                    cat.object(o).ok_or_else(|| CliError::Unresolved {
                        kind: format!("object of {name}"),
                        name: o.clone(),
                        pos: None,
                        suggestions: crate::resolve::suggest(o, cat.objects().iter().map(String::as_str)),
                    })?
                }
                None => 0,
            };
            let d = match &flags.telescope {
                Some(e) => {
                    report.params.insert("telescope".into(), e.clone());
                    report.params.insert("stages".into(), flags.stages.to_string());
                    let alpha = cat.morphism(j, j, e).ok_or_else(|| CliError::Unresolved {
                        kind: format!("endomorphism of {}", cat.objects()[j]),
                        name: e.clone(),
                        pos: None,
                        suggestions: crate::resolve::suggest(e, cat.morphisms().into_iter().map(|m| cat.name(m))),
                    })?;
                    telescope_diagram(&cat, j, alpha, flags.stages)?
                }
                None => restriction_diagram(&cat, j),
            };
            Ok((cat, d))
        }
    }
}

fn fibre_tables(report: &mut Report, cat: &SimplicialCategory, d: &Diagram, up_to: usize, c: Coefficients) {
    for (i, o) in cat.objects().iter().enumerate() {
        report.table(&format!("F({o})"), &homology_groups(d.value(i), up_to, c));
    }
}

fn borel(report: &mut Report, env: &Env, name: &str, flags: &Flags) -> Result<()> {
    let (cat, d) = diagram_for(env, name, flags, report)?;
    let up_to = flags.max_dim - 1;
    report.valid_up_to = Some(up_to);
    let c = flags.coefficients;
    let laws = d.law_violations(&cat);
    let lawful = laws.is_empty();
    report.check("functor laws", laws);
    fibre_tables(report, &cat, &d, up_to, c);
    if lawful {
        let total = borel_total(&cat, &d, flags.max_dim)?;
        report.params.insert("total_counts".into(), format!("{:?}", total.total.set.counts()));
        report.table("E", &homology_groups(&total.total.set, up_to, c));
        report.table("B", &homology_groups(&total.base.set, up_to, c));
        report.check("projection is simplicial", total.pi.violations());
    }
    Ok(())
}

fn classify(report: &mut Report, env: &Env, name: &str, flags: &Flags) -> Result<()> {
    let cat = env.category(name, None)?;
    let up_to = flags.max_dim - 1;
    report.valid_up_to = Some(up_to);
    let b = classifying_space(&cat, flags.max_dim)?;
    report.params.insert("counts".into(), format!("{:?}", b.set.counts()));
    report.table(&format!("B{name}"), &homology_groups(&b.set, up_to, flags.coefficients));
    let v = b.set.validate();
    report.check("nerve realization validates", v.violations.iter().map(|v| describe_violation(&b.set, v)).collect());
    Ok(())
}

fn group_completion(report: &mut Report, env: &Env, name: &str, flags: &Flags) -> Result<()> {
    let (cat, d) = diagram_for(env, name, flags, report)?;
    let r: GroupCompletionReport = group_completion_check(&cat, &d, flags.max_dim, &[])?;
    report.valid_up_to = Some(r.valid_up_to);
    for g in &r.gates {
        report.check(g.name.clone(), g.witnesses.clone());
    }
    let up_to = r.valid_up_to;
    let c = flags.coefficients;
    fibre_tables(report, &cat, &d, up_to, c);
    if let Some(total) = &r.total {
        report.table("E", &homology_groups(&total.total.set, up_to, c));
        report.table("B", &homology_groups(&total.base.set, up_to, c));
    }
    Ok(())
}

/// Folds semantic failures into witnesses; lookup and syntax errors propagate.
fn soft<T>(r: Result<T>) -> Result<std::result::Result<T, String>> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(e @ (CliError::Invalid { .. } | CliError::Core(_))) => Ok(Err(e.to_string())),
        Err(e) => Err(e),
    }
}

fn validate_sset(report: &mut Report, name: &str, x: &SimplicialSet) {
    let v = x.validate();
    report.check(format!("sset {name}"), v.violations.iter().map(|v| describe_violation(x, v)).collect());
}

fn validate_one(report: &mut Report, env: &Env, name: &str, kind: Kind) -> Result<()> {
    let doc = &env.doc;
    match kind {
        Kind::Sset => match doc.ssets.iter().find(|s| s.name.text == name) {
            Some(decl) => match soft(Env::build_sset(decl))? {
                Ok(x) => validate_sset(report, name, &x),
                Err(e) => report.check(format!("sset {name}"), vec![e]),
            },
            None => validate_sset(report, name, &builtin_sset(name).expect("kind was resolved")),
        },
        Kind::Map => {
            let why = match doc.maps.iter().find(|s| s.name.text == name) {
                Some(decl) => match soft(env.build_map(decl))? {
                    Ok((_, problems)) => problems,
                    Err(e) => vec![e],
                },
                None => builtin_map(name).expect("kind was resolved").violations(),
            };
            report.check(format!("map {name}"), why);
        }
        Kind::Category => {
            let why = if let Some(decl) = doc.monoids.iter().find(|s| s.name.text == name) {
                match soft(Env::monoid_table(decl))? {
                    Ok(t) => t.validate().err().map(|e| e.to_string()).into_iter().collect(),
                    Err(e) => vec![e],
                }
            } else if doc.categories.iter().any(|s| s.name.text == name) {
                soft(env.category(name, None))?.err().into_iter().collect()
            } else {
                builtin_monoid(name).expect("kind was resolved").validate().err().map(|e| e.to_string()).into_iter().collect()
            };
            report.check(format!("category {name}"), why);
        }
        Kind::Diagram => {
            let decl = doc.diagrams.iter().find(|s| s.name.text == name).expect("kind was resolved");
            let why = match soft(env.build_diagram(decl))? {
                Ok((cat, d)) => d.law_violations(&cat),
                Err(e) => vec![e],
            };
            report.check(format!("diagram {name}"), why);
        }
    }
    Ok(())
}

fn validate(report: &mut Report, env: &Env, target: Option<&str>) -> Result<()> {
    match target {
        Some(name) => {
            let kinds = env.kinds_of(name);
            if kinds.is_empty() {
                return Err(env.unknown(name, &[Kind::Sset, Kind::Map, Kind::Category, Kind::Diagram]));
            }
            for k in kinds {
                validate_one(report, env, name, k)?;
            }
        }
        None => {
            let d = &env.doc;
            let names: Vec<(String, Kind)> = d
                .ssets
                .iter()
                .map(|s| (s.name.text.clone(), Kind::Sset))
                .chain(d.maps.iter().map(|s| (s.name.text.clone(), Kind::Map)))
                .chain(d.monoids.iter().map(|s| (s.name.text.clone(), Kind::Category)))
                .chain(d.categories.iter().map(|s| (s.name.text.clone(), Kind::Category)))
                .chain(d.diagrams.iter().map(|s| (s.name.text.clone(), Kind::Diagram)))
                .collect();
            for (n, k) in names {
                validate_one(report, env, &n, k)?;
            }
        }
    }
    Ok(())
}
