//! Simplex preimages `dp(σ)` and the weak/strong homology-fibration checks.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::homology::{
    homology_groups, is_acyclic_with, iso_certificate_between, Coefficients, HomologyData, HomologyGroup,
    IsoCertificate,
};
use crate::sset::{
    codegeneracy, coface, delta_map, order_maps, representing_map, standard_simplex_truncated, PullbackIndex,
    SimplexRef, SimplicialMap, SimplicialSet, TupleSet,
};

/// The preimage of one base simplex.
#[derive(Clone, Debug)]
pub struct PreimageRecord {
    pub sigma: SimplexRef,
    /// Nondegenerate core of `sigma`; degenerate simplices are pulled back
    /// through the same representing map, recorded here for reference.
    pub core: SimplexRef,
    pub delta: Arc<SimplicialSet>,
    pub pullback: TupleSet,
}

impl PreimageRecord {
    pub fn space(&self) -> &Arc<SimplicialSet> {
        self.pullback.set()
    }

    /// `dp(σ) -> Δ[n]`.
    pub fn structure_map(&self) -> SimplicialMap {
        self.pullback.projection(0)
    }

    /// `dp(σ) -> E`.
    pub fn to_total(&self) -> SimplicialMap {
        self.pullback.projection(1)
    }
}

/// A registered homotopy fibre over the component of a base vertex.
#[derive(Clone, Debug)]
pub struct KnownFiberSpec {
    pub vertex: SimplexRef,
    pub fiber: Arc<SimplicialSet>,
    /// A map `fiber -> E` landing over `vertex`, when one is known. Without it
    /// only the homology groups are compared.
    pub into_total: Option<SimplicialMap>,
    pub provenance: String,
}

/// One comparison `dp(θσ) -> dp(σ)` (or the section for degeneracies).
#[derive(Clone, Debug)]
pub struct PairCheck {
    pub sigma: SimplexRef,
    pub sigma_label: String,
    pub operation: String,
    pub certificate: IsoCertificate,
}

impl PairCheck {
    pub fn passed(&self) -> bool {
        self.certificate.is_iso()
    }

    pub fn witness(&self) -> String {
        match self.certificate.failure() {
            Some(f) => format!("({}, {} {}) at degree {}: {}", self.sigma_label, self.operation, self.sigma_label, f.degree, f.describe()),
            None => format!("({}, {} {})", self.sigma_label, self.operation, self.sigma_label),
        }
    }
}

#[derive(Clone, Debug)]
pub struct WeakReport {
    pub up_to: usize,
    pub pairs: Vec<PairCheck>,
}

impl WeakReport {
    pub fn passed(&self) -> bool {
        self.pairs.iter().all(PairCheck::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PairCheck> {
        self.pairs.iter().filter(|p| !p.passed())
    }
}

/// Outcome of the strong check against a registered fibre.
#[derive(Clone, Debug)]
pub struct StrongReport {
    pub provenance: String,
    /// `fiber -> dp(v)` when a map was supplied.
    pub fiber_map: Option<IsoCertificate>,
    pub fiber_homology: Vec<HomologyGroup>,
    pub checks: Vec<PairCheck>,
    /// Simplices whose preimage homology differs from the fibre's.
    pub mismatched: Vec<String>,
}

impl StrongReport {
    pub fn passed(&self) -> bool {
        self.fiber_map.as_ref().map_or(true, IsoCertificate::is_iso)
            && self.checks.iter().all(PairCheck::passed)
            && self.mismatched.is_empty()
    }
}

/// Result of the check over an acyclic base.
#[derive(Clone, Debug)]
pub struct ContractibleBaseReport {
    pub base_connected: bool,
    pub base_acyclic: bool,
    pub table: Vec<HomologyGroup>,
    pub comparisons: Vec<PairCheck>,
    pub inclusions: Vec<PairCheck>,
    pub warnings: Vec<String>,
}

impl ContractibleBaseReport {
    pub fn passed(&self) -> bool {
        self.comparisons.iter().all(PairCheck::passed) && self.inclusions.iter().all(PairCheck::passed)
    }
}

type Cached = Arc<(PreimageRecord, HomologyData)>;

/// A map `p: E -> B` prepared for preimage computations.
pub struct Fibration {
    map: SimplicialMap,
    bound: usize,
    coefficients: Coefficients,
    index: PullbackIndex,
    deltas: Mutex<HashMap<usize, Arc<SimplicialSet>>>,
    cache: Mutex<HashMap<(SimplexRef, usize), Cached>>,
}

impl Fibration {
    /// `bound` is the truncation used for every preimage.
    pub fn new(map: SimplicialMap, bound: usize) -> Self {
        Self::with_coefficients(map, bound, Coefficients::Integers)
    }

    pub fn with_coefficients(map: SimplicialMap, bound: usize, coefficients: Coefficients) -> Self {
        let index = PullbackIndex::new(map.clone(), bound);
        Fibration {
            map,
            bound,
            coefficients,
            index,
            deltas: Mutex::new(HashMap::new()),
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn map(&self) -> &SimplicialMap {
        &self.map
    }

    pub fn base(&self) -> &Arc<SimplicialSet> {
        self.map.target()
    }

    pub fn total(&self) -> &Arc<SimplicialSet> {
        self.map.source()
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    fn delta(&self, n: usize) -> Arc<SimplicialSet> {
        self.deltas
            .lock()
            .unwrap()
            .entry(n)
            .or_insert_with(|| Arc::new(standard_simplex_truncated(n, self.bound)))
            .clone()
    }

    /// `dp(σ)`, the pullback of `Δ[n] -> B` along `p`.
    pub fn dp(&self, sigma: SimplexRef) -> Result<PreimageRecord> {
        let base = self.base();
        if !base.contains(sigma) {
            return Err(Error::UnknownSimplex(sigma.to_string()));
        }
        let delta = self.delta(sigma.dim());
        let rep = representing_map(delta.clone(), base.clone(), sigma);
        let rep_index = PullbackIndex::new(rep, self.bound);
        let pullback = TupleSet::pullback_indexed(&[&rep_index, &self.index], self.bound)?;
        Ok(PreimageRecord { sigma, core: sigma.core(), delta, pullback })
    }

    fn cached(&self, sigma: SimplexRef, up_to: usize) -> Result<Cached> {
        if let Some(c) = self.cache.lock().unwrap().get(&(sigma, up_to)) {
            return Ok(c.clone());
        }
        let rec = self.dp(sigma)?;
        let data = HomologyData::compute(rec.space(), up_to, self.coefficients);
        let entry = Arc::new((rec, data));
        self.cache.lock().unwrap().insert((sigma, up_to), entry.clone());
        Ok(entry)
    }

    /// The canonical map `dp(θσ) -> dp(σ)` for `θ: [k] -> [n]`, with both ends.
    pub fn comparison(&self, sigma: SimplexRef, theta: &[usize]) -> Result<(PreimageRecord, PreimageRecord, SimplicialMap)> {
        let lower = self.dp(self.base().apply(sigma, theta))?;
        let upper = self.dp(sigma)?;
        let map = comparison_map(&lower, &upper, theta)?;
        Ok((lower, upper, map))
    }

    /// Pullback of `f: K -> B` along `p`.
    pub fn dp_along(&self, f: &SimplicialMap) -> Result<TupleSet> {
        if **f.target() != **self.base() {
            return Err(Error::MismatchedTargets);
        }
        let f_index = PullbackIndex::new(f.clone(), self.bound);
        TupleSet::pullback_indexed(&[&f_index, &self.index], self.bound)
    }

    fn pair(&self, sigma: SimplexRef, theta: &[usize], operation: String, up_to: usize) -> Result<PairCheck> {
        let base = self.base();
        let lower = self.cached(base.apply(sigma, theta), up_to)?;
        let upper = self.cached(sigma, up_to)?;
        let map = comparison_map(&lower.0, &upper.0, theta)?;
        let certificate = iso_certificate_between(&map, &lower.1, &upper.1);
        Ok(PairCheck { sigma, sigma_label: base.label(sigma).to_string(), operation, certificate })
    }

    /// Tests every generating operation on every nondegenerate base simplex,
    /// or every operation `[k] -> [n]` with `k <= n + 1` when `deep` is set.
    pub fn weak_check(&self, up_to: usize, deep: bool) -> Result<WeakReport> {
        let base = self.base().clone();
        let mut jobs: Vec<(SimplexRef, Vec<usize>, String, Option<SimplexRef>)> = Vec::new();
        for sigma in base.generators() {
            let n = sigma.dim();
            if deep {
                for k in 0..=(n + 1).min(self.bound) {
                    for theta in order_maps(k, n) {
                        if k == n && theta.iter().enumerate().all(|(a, &b)| a == b) {
                            continue;
                        }
                        let name = format!("θ{theta:?}");
                        jobs.push((sigma, theta, name, None));
                    }
                }
                continue;
            }
            if n >= 1 {
                for i in 0..=n {
                    jobs.push((sigma, coface(n, i), format!("d{i}"), None));
                }
            }
            if n < self.bound {
                for i in 0..=n {
                    // dp(s_i σ) against dp(σ) through the section d_i
                    let tau = base.apply(sigma, &codegeneracy(n, i));
                    jobs.push((tau, coface(n + 1, i), format!("s{i}"), Some(sigma)));
                }
            }
        }
        let pairs: Vec<PairCheck> = jobs
            .par_iter()
            .map(|(s, theta, name, shown)| {
                let mut pc = self.pair(*s, theta, name.clone(), up_to)?;
                if let Some(orig) = shown {
                    pc.sigma = *orig;
                    pc.sigma_label = base.label(*orig).to_string();
                }
                Ok(pc)
            })
            .collect::<Result<_>>()?;
        Ok(WeakReport { up_to, pairs })
    }

    /// Compares every preimage in the component of `spec.vertex` with the
    /// registered fibre.
    pub fn strong_check(&self, spec: &KnownFiberSpec, up_to: usize) -> Result<StrongReport> {
        let base = self.base().clone();
        let fiber_data = HomologyData::compute(&spec.fiber, up_to, self.coefficients);
        let fiber_homology = fiber_data.groups();
        let v = self.cached(spec.vertex, up_to)?;
        let fiber_map = match &spec.into_total {
            Some(m) => {
                let to_point =
                    SimplicialMap::constant(spec.fiber.clone(), v.0.delta.clone(), SimplexRef::generator(0, 0));
                let lifted = v.0.pullback.lift(&[to_point, m.clone()])?;
                Some(iso_certificate_between(&lifted, &fiber_data, &v.1))
            }
            None => None,
        };
        let component = component_of(&base, spec.vertex);
        let sigmas: Vec<SimplexRef> = base.generators().filter(|s| component.contains(&base.apply(*s, &[0]))).collect();
        let results: Vec<(PairCheck, Option<String>)> = sigmas
            .par_iter()
            .map(|&sigma| {
                let pc = self.pair(sigma, &[0], "vertex0".into(), up_to)?;
                let data = self.cached(sigma, up_to)?;
                let same = data.1.degrees.iter().zip(&fiber_homology).all(|(d, f)| d.group.invariants() == f.invariants());
                Ok((pc, (!same).then(|| base.label(sigma).to_string())))
            })
            .collect::<Result<_>>()?;
        let (checks, mismatched): (Vec<PairCheck>, Vec<Option<String>>) = results.into_iter().unzip();
        Ok(StrongReport {
            provenance: spec.provenance.clone(),
            fiber_map,
            fiber_homology,
            checks,
            mismatched: mismatched.into_iter().flatten().collect(),
        })
    }

    /// Checks all preimages over an acyclic connected base against each other
    /// and against `E`, returning their common homology.
    pub fn over_contractible(&self, up_to: usize) -> Result<ContractibleBaseReport> {
        let base = self.base().clone();
        let mut warnings = Vec::new();
        let base_connected = homology_groups(&base, 0, Coefficients::Integers)[0].free_rank == 1;
        let base_acyclic = is_acyclic_with(&base, up_to, self.coefficients);
        if !base_connected {
            warnings.push("base is not connected".to_string());
        }
        if !base_acyclic {
            warnings.push(format!("base is not acyclic through degree {up_to}"));
        }
        let weak = self.weak_check(up_to, false)?;
        let comparisons: Vec<PairCheck> = weak.pairs.into_iter().filter(|p| p.operation.starts_with('d')).collect();
        let total = HomologyData::compute(self.total(), up_to, self.coefficients);
        let inclusions: Vec<PairCheck> = base
            .generators()
            .collect::<Vec<_>>()
            .par_iter()
            .map(|&sigma| {
                let data = self.cached(sigma, up_to)?;
                let certificate = iso_certificate_between(&data.0.to_total(), &data.1, &total);
                Ok(PairCheck {
                    sigma,
                    sigma_label: base.label(sigma).to_string(),
                    operation: "into E".into(),
                    certificate,
                })
            })
            .collect::<Result<_>>()?;
        let first = base.generators().next().ok_or(Error::UnknownSimplex("empty base".into()))?;
        let table = self.cached(first, up_to)?.1.groups();
        Ok(ContractibleBaseReport { base_connected, base_acyclic, table, comparisons, inclusions, warnings })
    }
}

/// `dp(θσ) -> dp(σ)`, `(a, e) ↦ (θ_* a, e)`.
pub fn comparison_map(lower: &PreimageRecord, upper: &PreimageRecord, theta: &[usize]) -> Result<SimplicialMap> {
    let theta_star = delta_map(lower.delta.clone(), upper.delta.clone(), theta);
    let a = lower.structure_map().then(&theta_star);
    let e = lower.to_total();
    upper.pullback.lift(&[a, e])
}

/// Vertices in the connected component of `v`.
pub fn component_of(x: &SimplicialSet, v: SimplexRef) -> BTreeSet<SimplexRef> {
    let mut adj: BTreeMap<SimplexRef, Vec<SimplexRef>> = BTreeMap::new();
    for e in x.level(1) {
        let (a, b) = (e.faces[0], e.faces[1]);
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    let mut seen = BTreeSet::from([v]);
    let mut stack = vec![v];
    while let Some(u) = stack.pop() {
        for &w in adj.get(&u).map_or(&[][..], Vec::as_slice) {
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen
}

pub fn dp(p: &SimplicialMap, sigma: SimplexRef, bound: usize) -> Result<PreimageRecord> {
    Fibration::new(p.clone(), bound).dp(sigma)
}

pub fn dp_along(p: &SimplicialMap, f: &SimplicialMap, bound: usize) -> Result<TupleSet> {
    Fibration::new(p.clone(), bound).dp_along(f)
}

/// Weak check with preimages truncated one above `up_to`.
pub fn weak_fibration_check(p: &SimplicialMap, up_to: usize) -> Result<WeakReport> {
    Fibration::new(p.clone(), up_to + 1).weak_check(up_to, false)
}

pub fn strong_check_via_known_fiber(p: &SimplicialMap, spec: &KnownFiberSpec, up_to: usize) -> Result<StrongReport> {
    Fibration::new(p.clone(), up_to + 1).strong_check(spec, up_to)
}

pub fn fiber_homology_over_contractible(p: &SimplicialMap, up_to: usize) -> Result<ContractibleBaseReport> {
    Fibration::new(p.clone(), up_to + 1).over_contractible(up_to)
}

/// The pullback `E' = B' ×_B E -> B'` of `p` along `f`.
#[derive(Clone, Debug)]
pub struct PulledBack {
    pub total: TupleSet,
    pub map: SimplicialMap,
    /// Caller's assertion that `f` is a fibration.
    pub assumes_fibration: bool,
}

pub fn pullback_fibration(p: &SimplicialMap, f: &SimplicialMap, bound: usize, assumes_fibration: bool) -> Result<PulledBack> {
    let total = TupleSet::pullback(&[f.clone(), p.clone()], bound)?;
    let map = total.projection(0);
    Ok(PulledBack { total, map, assumes_fibration })
}
