mod common;

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;

use hofib::homology::snf::smith_normal_form;
use hofib::homology::{homology_groups, induced, Coefficients};
use hofib::sset::{
    closure, disjoint_union, polygon, polygon_covering, presentation_complex, product, standard_simplex, subcomplex,
    suspension, Generator, Label, SimplexRef, Word,
};
use hofib::subdivision::sd;
use hofib::{SimplicialMap, SimplicialSet};

fn subcomplex_of_delta() -> impl Strategy<Value = Arc<SimplicialSet>> {
    (1usize..=4, prop::collection::vec(1u32..32, 1..6)).prop_map(|(n, seeds)| {
        let delta = Arc::new(standard_simplex(n));
        let full = (1u32 << (n + 1)) - 1;
        let gens: Vec<SimplexRef> = seeds
            .into_iter()
            .map(|m| if m & full == 0 { 1 } else { m & full })
            .map(|m| delta.find(&Label::Face(m)).unwrap())
            .collect();
        subcomplex(&delta, &closure(&delta, gens)).unwrap().set
    })
}

fn presentation() -> impl Strategy<Value = Arc<SimplicialSet>> {
    let letter = (0usize..2, prop_oneof![Just(1i8), Just(-1i8)]);
    prop::collection::vec(prop::collection::vec(letter, 1..6), 1..3)
        .prop_filter_map("relators reduce to nothing", |rels: Vec<Word>| {
            presentation_complex(&["a", "b"], &rels).ok().map(Arc::new)
        })
}

fn space() -> impl Strategy<Value = Arc<SimplicialSet>> {
    prop_oneof![subcomplex_of_delta(), presentation()]
}

fn small_space() -> impl Strategy<Value = Arc<SimplicialSet>> {
    prop_oneof![
        (0usize..=2).prop_map(|n| Arc::new(standard_simplex(n))),
        (1usize..=4).prop_map(|n| Arc::new(polygon(n))),
        subcomplex_of_delta().prop_filter("keep products small", |x| x.max_dim() <= 2),
    ]
}

fn table(x: &SimplicialSet, up_to: usize, c: Coefficients) -> Vec<String> {
    homology_groups(x, up_to, c).iter().map(|g| g.to_string()).collect()
}

/// Rotates the generators of every level by `r`, rewriting faces.
fn rotated(x: &SimplicialSet, r: usize) -> SimplicialSet {
    let new_index = |d: usize, g: usize| (g + r) % x.count(d);
    let levels = (0..=x.max_dim())
        .map(|d| {
            let n = x.count(d);
            let mut level: Vec<Option<Generator>> = vec![None; n];
            for (g, gen) in x.level(d).iter().enumerate() {
                let faces = gen
                    .faces
                    .iter()
                    .map(|f| SimplexRef::generator(f.gen_dim(), new_index(f.gen_dim(), f.gen())).degenerate(f.degeneracy))
                    .collect();
                level[new_index(d, g)] = Some(Generator { label: gen.label.clone(), faces });
            }
            level.into_iter().map(Option::unwrap).collect()
        })
        .collect();
    SimplicialSet::from_levels_unchecked(levels, x.truncation())
}

fn det(m: &[Vec<BigInt>]) -> BigInt {
    // Bareiss fraction-free elimination
    let n = m.len();
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

fn mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    a.iter().map(|row| (0..b[0].len()).map(|j| row.iter().zip(b).map(|(x, r)| x * &r[j]).sum()).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn operators_compose(x in space(), pick in any::<prop::sample::Index>(),
                         t1 in prop::collection::vec(0usize..8, 1..4), t2 in prop::collection::vec(0usize..8, 1..4)) {
        let gens: Vec<SimplexRef> = x.generators().collect();
        let g = gens[pick.index(gens.len())];
        let n = g.dim();
        let mut th1: Vec<usize> = t1.iter().map(|v| v % (n + 1)).collect();
        th1.sort_unstable();
        let k = th1.len() - 1;
        let mut th2: Vec<usize> = t2.iter().map(|v| v % (k + 1)).collect();
        th2.sort_unstable();
        let composite: Vec<usize> = th2.iter().map(|&i| th1[i]).collect();
        let step = x.apply(x.apply(g, &th1), &th2);
        prop_assert_eq!(step, x.apply(g, &composite));
        prop_assert!(x.contains(step));
        prop_assert!(!step.core().is_degenerate());
    }

    #[test]
    fn constructions_validate(x in space()) {
        prop_assert!(x.validate().is_empty());
        prop_assert!(sd(x.clone()).set().validate().is_empty());
        prop_assert!(suspension(&x).unwrap().0.validate().is_empty());
    }

    #[test]
    fn product_symmetry_and_unit(x in small_space(), y in small_space()) {
        let bound = x.max_dim() + y.max_dim();
        let xy = product(x.clone(), y.clone(), bound);
        let yx = product(y.clone(), x.clone(), bound);
        prop_assert_eq!(xy.set().counts(), yx.set().counts());
        let swap = yx.lift(&[xy.projection(1), xy.projection(0)]).unwrap();
        prop_assert!(swap.is_valid());
        prop_assert!(swap.is_isomorphism());
        let unit = product(x.clone(), Arc::new(standard_simplex(0)), bound);
        prop_assert!(unit.projection(0).is_isomorphism());
        prop_assert!(xy.set().validate().is_empty());
    }

    #[test]
    fn euler_characteristic_laws(x in small_space(), y in small_space()) {
        let bound = x.max_dim() + y.max_dim();
        let xy = product(x.clone(), y.clone(), bound);
        prop_assert_eq!(xy.set().euler_characteristic(), x.euler_characteristic() * y.euler_characteristic());
        let sum = disjoint_union(&[x.clone(), y.clone()]);
        prop_assert_eq!(sum.set.euler_characteristic(), x.euler_characteristic() + y.euler_characteristic());
        let h = homology_groups(&x, x.max_dim(), Coefficients::Integers);
        let alt: i64 = h.iter().enumerate().map(|(k, g)| if k % 2 == 0 { g.free_rank as i64 } else { -(g.free_rank as i64) }).sum();
        prop_assert_eq!(alt, x.euler_characteristic());
    }

    #[test]
    fn smith_form_diagonalizes(rows in 1usize..5, cols in 1usize..5, entries in prop::collection::vec(-6i64..=6, 25)) {
        let m: Vec<Vec<BigInt>> = (0..rows).map(|r| (0..cols).map(|c| BigInt::from(entries[r * 5 + c])).collect()).collect();
        let (u, d, v) = smith_normal_form(&m);
        prop_assert_eq!(&mul(&mul(&u, &m), &v), &d);
        prop_assert!(det(&u).abs().is_one());
        prop_assert!(det(&v).abs().is_one());
        let mut diag = Vec::new();
        for (i, row) in d.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if i != j { prop_assert!(x.is_zero()); } else if !x.is_zero() { diag.push(x.clone()); }
            }
        }
        for w in diag.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        let reference = common::invariant_factors(m.iter().map(|r| r.iter().map(|x| x.to_i128().unwrap()).collect()).collect());
        let ours: Vec<i128> = diag.iter().map(|x| x.abs().to_i128().unwrap()).collect();
        prop_assert_eq!(ours, reference);
    }

    #[test]
    fn universal_coefficients(x in space()) {
        let top = x.max_dim();
        let z = homology_groups(&x, top, Coefficients::Integers);
        for p in [2u64, 3] {
            let fp = homology_groups(&x, top, Coefficients::Mod(p));
            let t = |k: usize| z[k].torsion.iter().filter(|q| (*q % BigInt::from(p)).is_zero()).count();
            for k in 0..=top {
                let want = z[k].free_rank + t(k) + if k > 0 { t(k - 1) } else { 0 };
                prop_assert_eq!(fp[k].free_rank, want, "degree {} mod {}", k, p);
            }
        }
    }

    #[test]
    fn homology_ignores_generator_order(x in space(), r in 0usize..7) {
        let y = rotated(&x, r);
        prop_assert!(y.validate().is_empty());
        prop_assert_eq!(table(&x, x.max_dim(), Coefficients::Integers), table(&y, y.max_dim(), Coefficients::Integers));
    }

    #[test]
    fn homology_matches_reference(x in space()) {
        let top = x.max_dim();
        prop_assert_eq!(table(&x, top, Coefficients::Integers), common::render(&common::reference_homology(&x, top)));
    }

    #[test]
    fn induced_maps_compose(a in 1usize..4, b in 1usize..4, c in 1usize..4) {
        let big = Arc::new(polygon(a * b * c));
        let mid = Arc::new(polygon(b * c));
        let small = Arc::new(polygon(c));
        let f = polygon_covering(big.clone(), mid.clone());
        let g = polygon_covering(mid.clone(), small.clone());
        let gf = f.then(&g);
        for k in 0..=1 {
            prop_assert_eq!(induced(&gf, k).matrix, induced(&g, k).compose(&induced(&f, k)).matrix);
        }
        prop_assert!(induced(&SimplicialMap::identity(big.clone()), 1).is_identity());
        let (sb, sm, ss) = (sd(big), sd(mid), sd(small));
        let lhs = sb.map(&gf, &ss);
        let rhs = sb.map(&f, &sm).then(&sm.map(&g, &ss));
        prop_assert!(lhs.agrees_with(&rhs));
    }
}
