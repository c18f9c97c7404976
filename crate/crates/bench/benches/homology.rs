use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use hofib::borel::{classifying_space, MonoidTable, SimplicialCategory};
use hofib::homology::{homology_groups, smith_normal_form, Coefficients};
use hofib::sset::{binary_icosahedral, polygon};
use num_bigint::BigInt;

fn spaces(c: &mut Criterion) {
    let p = binary_icosahedral();
    c.bench_function("homology/binary_icosahedral", |b| {
        b.iter(|| homology_groups(black_box(&p), 3, Coefficients::Integers))
    });
    let b2 = classifying_space(&SimplicialCategory::from_monoid(&MonoidTable::cyclic(2)).unwrap(), 5).unwrap();
    c.bench_function("homology/bz2_to_5", |b| b.iter(|| homology_groups(black_box(&b2.set), 4, Coefficients::Integers)));
    c.bench_function("homology/bz2_mod2", |b| b.iter(|| homology_groups(black_box(&b2.set), 4, Coefficients::Mod(2))));
    let circle = polygon(64);
    c.bench_function("homology/polygon64", |b| b.iter(|| homology_groups(black_box(&circle), 2, Coefficients::Integers)));
}

fn smith(c: &mut Criterion) {
    // A dense 24x24 matrix with entries in [-4, 4].
    let m: Vec<Vec<BigInt>> = (0..24)
        .map(|i| (0..24).map(|j| BigInt::from(((i * 7 + j * 13 + i * j) % 9) as i64 - 4)).collect())
        .collect();
    c.bench_function("snf/dense24", |b| b.iter(|| smith_normal_form(black_box(&m))));
}

criterion_group!(benches, spaces, smith);
criterion_main!(benches);
