use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use vstar::exec;
use vstar::formulas::EvalConfig;
use vstar::interp::{check_defeq, Sample};
use vstar::suite::transfer_discrepancies;
use vstar::theories::{enumerate_models, Catalog};

fn modes() -> [(&'static str, bool); 2] {
    [("sequential", false), ("parallel", true)]
}

fn enumerate(c: &mut Criterion) {
    let cat = Catalog::builtin();
    let top = cat.theory("top").unwrap();
    let mut group = c.benchmark_group("enumerate_top_3");
    for (name, on) in modes() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            exec::set_parallel(on);
            b.iter(|| enumerate_models(top, 3, EvalConfig::default()).unwrap().models.len())
        });
    }
    group.finish();
}

fn defeq(c: &mut Criterion) {
    let cat = Catalog::builtin();
    let config = EvalConfig::default();
    let (t, s) = cat.pair("top-nei").unwrap();
    let ts = Sample::exhaustive(&cat, "top", 3, config).unwrap();
    let ss = Sample::exhaustive(&cat, "nei", 3, config).unwrap();
    let mut group = c.benchmark_group("defeq_top_nei_3");
    group.sample_size(10);
    for (name, on) in modes() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            exec::set_parallel(on);
            b.iter(|| check_defeq(&cat, t, s, &ts, &ss, config).unwrap().status)
        });
    }
    group.finish();
}

fn transfer(c: &mut Criterion) {
    let mut group = c.benchmark_group("transfer_200");
    for (name, on) in modes() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            exec::set_parallel(on);
            b.iter(|| transfer_discrepancies(1, 200, EvalConfig::default()).len())
        });
    }
    group.finish();
    exec::set_parallel(true);
}

criterion_group!(benches, enumerate, defeq, transfer);
criterion_main!(benches);
