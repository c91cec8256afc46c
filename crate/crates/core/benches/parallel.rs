use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rayon::ThreadPoolBuilder;

use sweepout::builder::{build_witness, verify_witness, VerifyMode, VerifyOptions, WitnessOptions};
use sweepout::exactreal::{rat, GeneratorBasis, Point};
use sweepout::lattice::{decompose, enumerate_lattice};
use sweepout::measure::MeasureSequence;

fn pools() -> Vec<(String, rayon::ThreadPool)> {
    let default_threads = rayon::current_num_threads();
    vec![
        (
            "sequential".to_string(),
            ThreadPoolBuilder::new().num_threads(1).build().unwrap(),
        ),
        (
            format!("rayon-{default_threads}"),
            ThreadPoolBuilder::new().build().unwrap(),
        ),
    ]
}

fn lattice_scan(c: &mut Criterion) {
    let b = GeneratorBasis::surds(&[2, 3]).unwrap();
    let x = [
        Point::generator(&b, 1, rat(1, 8)),
        Point::generator(&b, 2, rat(1, 4)),
    ];
    let spec = decompose(&x).unwrap();
    let mut group = c.benchmark_group("enumerate_lattice_m100");
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(name), |bench| {
            bench.iter(|| pool.install(|| enumerate_lattice(&spec, 100, 10_000_000).unwrap().len()))
        });
    }
    group.finish();
}

fn factor_verification(c: &mut Criterion) {
    let b = GeneratorBasis::surds(&[2, 3]).unwrap();
    let atoms = [
        Point::generator(&b, 1, rat(1, 1)),
        Point::generator(&b, 2, rat(1, 1)),
    ];
    let seq = MeasureSequence::geometric(&atoms, &[rat(1, 2), rat(1, 2)], &rat(1, 4), 60).unwrap();
    let w = build_witness(&seq, &rat(1, 4), &rat(1, 2), &WitnessOptions::default())
        .unwrap()
        .witness;
    let opts = VerifyOptions {
        samples: 2000,
        ..VerifyOptions::default()
    };
    let mut group = c.benchmark_group("verify_sampled_m7");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(name), |bench| {
            bench.iter(|| {
                pool.install(|| {
                    verify_witness(&w, &seq, VerifyMode::Sampled, &opts)
                        .unwrap()
                        .passed
                })
            })
        });
    }
    group.finish();
}

criterion_group!(benches, lattice_scan, factor_verification);
criterion_main!(benches);
