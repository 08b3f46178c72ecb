use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use hyperdet_core::arith::RationalFunction;
use hyperdet_core::asm;
use hyperdet_core::detlib::{det_lambda, vandermonde_matrix};
use hyperdet_core::dyson::dyson_coefficient;
use hyperdet_core::hyper::{lambda_tuple_sum, PhiConvention};
use hyperdet_core::laurent::LaurentPoly;
use hyperdet_core::symfun::{Macdonald, Partition};
use hyperdet_core::verify::rectangular_hypermatrix;
use hyperdet_core::Limits;

fn asm_enumeration(c: &mut Criterion) {
    c.bench_function("asm enumerate n=6", |b| b.iter(|| asm::enumerate(6).unwrap().count()));
}

fn lambda_determinant(c: &mut Criterion) {
    let xs: Vec<LaurentPoly> = (0..4).map(|i| LaurentPoly::var(i, 4)).collect();
    let a = vandermonde_matrix(&xs);
    let lambda = RationalFunction::q();
    c.bench_function("det_lambda vandermonde n=4", |b| {
        b.iter(|| det_lambda(&a, &lambda).unwrap())
    });
}

fn rectangular_sum(c: &mut Criterion) {
    let limits = Limits::default();
    let a = rectangular_hypermatrix(1, 3, 1).unwrap().to_dense().unwrap();
    let lambda = RationalFunction::q();
    c.bench_function("lambda_tuple_sum k=1 s=3 m=1", |b| {
        b.iter(|| lambda_tuple_sum(&a, &lambda, PhiConvention::ProofConsistent, &limits).unwrap())
    });
}

fn dyson(c: &mut Criterion) {
    let limits = Limits::default();
    c.bench_function("dyson k=1 s=3 m=1", |b| {
        b.iter(|| dyson_coefficient(1, 3, 1, &limits).unwrap())
    });
}

fn gram_schmidt(c: &mut Criterion) {
    let lambda = Partition::from_parts(vec![2, 2]);
    c.bench_function("macdonald P[2,2] m=2 cold", |b| {
        b.iter_batched(
            || Macdonald::new(Limits::default()),
            |engine| engine.p(&lambda, 2).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = asm_enumeration, lambda_determinant, rectangular_sum, dyson, gram_schmidt
}
criterion_main!(benches);
