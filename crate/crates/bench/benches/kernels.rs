use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dquiver::poset::OrbitSpace;
use dquiver::quiver::hom_dim;
use dquiver::slice::SliceParams;
use dquiver::star::StarEmbedding;
use dquiver::zigzag::DnFamily;
use dquiver::{DimVector, ExactMatrix, Field, Quiver, Representation};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn d5() -> Arc<Quiver> {
    Arc::new(
        Quiver::new(
            ["1", "2", "3", "4", "5"],
            [
                ("a", "1", "3"),
                ("b", "2", "3"),
                ("c", "3", "4"),
                ("d", "5", "4"),
            ],
        )
        .unwrap(),
    )
}

fn rank(c: &mut Criterion) {
    let mut group = c.benchmark_group("rank");
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for size in [8, 16, 32] {
        for field in [Field::Rational, Field::Prime(32_003)] {
            let m = ExactMatrix::random(field, size, size, 9, &mut rng);
            group.bench_with_input(BenchmarkId::new(field.to_string(), size), &m, |b, m| {
                b.iter(|| black_box(m).rank())
            });
        }
    }
    group.finish();
}

fn signature(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let q = d5();
    let d = DimVector(vec![2, 1, 3, 2, 1]);
    let v = Representation::random(q.clone(), Field::Rational, d.clone(), 5, &mut rng).unwrap();
    let e = StarEmbedding::new(q, d).unwrap();
    let fam = DnFamily::new(e.n()).unwrap();
    c.bench_function("signature/d5", |b| {
        b.iter(|| fam.signature(&e.extend(black_box(&v)).unwrap()).unwrap())
    });
}

fn hom(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let q = d5();
    let d = DimVector(vec![2, 1, 3, 2, 1]);
    let v = Representation::random(q.clone(), Field::Rational, d.clone(), 5, &mut rng).unwrap();
    let w = Representation::random(q, Field::Rational, d, 5, &mut rng).unwrap();
    c.bench_function("hom_dim/d5", |b| {
        b.iter(|| hom_dim(black_box(&v), black_box(&w)).unwrap())
    });
}

fn eta(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let params = Arc::new(SliceParams::for_n(2, DimVector(vec![1, 2, 1, 2, 1, 2, 1])).unwrap());
    let fam = DnFamily::new(2).unwrap();
    let v = Representation::random(
        fam.star().quiver().clone(),
        Field::Rational,
        params.dims().clone(),
        5,
        &mut rng,
    )
    .unwrap();
    c.bench_function("eta/n2", |b| {
        b.iter(|| params.eta_with(fam.matrices(), black_box(&v)).unwrap())
    });
    let p = params.eta_with(fam.matrices(), &v).unwrap();
    c.bench_function("slice_signature/n2", |b| {
        b.iter(|| black_box(&p).signature())
    });
}

fn poset(c: &mut Criterion) {
    let q = Arc::new(
        Quiver::new(
            ["1", "2", "3", "4"],
            [("a", "1", "2"), ("b", "3", "2"), ("c", "2", "4")],
        )
        .unwrap(),
    );
    let space = OrbitSpace::new(q, DimVector(vec![1, 2, 1, 1]), Field::Rational, 0).unwrap();
    let mut group = c.benchmark_group("poset");
    group.sample_size(10);
    group.bench_function("signatures/d4", |b| b.iter(|| space.hasse(1000).unwrap()));
    group.bench_function("oracle/d4", |b| {
        b.iter(|| space.hasse_by_oracle(1000).unwrap())
    });
    group.finish();
}

criterion_group!(benches, rank, signature, hom, eta, poset);
criterion_main!(benches);
