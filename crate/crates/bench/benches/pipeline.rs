use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use fvrp_core::formula::{parse_bool_formula, parse_ring_formula};
use fvrp_core::fv::{decide_in_model, reduce, ReduceOptions};
use fvrp_core::rprod::{sigma1_decide, RPModel, SigmaLimits};
use fvrp_core::tarski_qe::{decide_sentence, eliminate_quantifiers};

const GF4_WITH_EXCEPTIONS: &str = "tail = gf4\nphi = \"x*x = x\"\nexception 0 = zmod(2)\nexception 2 = gf4";

fn boolean_elimination(c: &mut Criterion) {
    let f = parse_bool_formula("E y. (y <= x & C2(y) & Fin(y) & E z. (z <= x \\ y & C3(z)))").unwrap();
    c.bench_function("qe/nested-counting", |b| b.iter(|| eliminate_quantifiers(black_box(&f)).unwrap()));
    let s = parse_bool_formula("A x. E y. (y <= x & (Fin(x) | ~Fin(y) & ~Fin(x \\ y)))").unwrap();
    c.bench_function("qe/splitting-sentence", |b| b.iter(|| decide_sentence(black_box(&s)).unwrap()));
}

fn reduction(c: &mut Criterion) {
    let phi = parse_ring_formula("x*x = x").unwrap();
    let theta = parse_ring_formula("E y. (x*y = 1 & y*y = y)").unwrap();
    let options = ReduceOptions::default();
    c.bench_function("fv/reduce-one-quantifier", |b| b.iter(|| reduce(black_box(&theta), &phi, &options).unwrap()));
}

fn deciding(c: &mut Criterion) {
    let model = RPModel::from_config(GF4_WITH_EXCEPTIONS).unwrap();
    let s = parse_ring_formula("E x. E y. (x*y = 1 & ~(x*x = x))").unwrap();
    let options = ReduceOptions::default();
    c.bench_function("fv/decide-two-quantifiers", |b| b.iter(|| decide_in_model(&model, black_box(&s), &options).unwrap()));
    let limits = SigmaLimits::default();
    c.bench_function("oracle/sigma1", |b| b.iter(|| sigma1_decide(&model, black_box(&s), &limits).unwrap()));
}

criterion_group!(benches, boolean_elimination, reduction, deciding);
criterion_main!(benches);
