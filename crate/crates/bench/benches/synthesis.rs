use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use hermsynth_bench::bench_config;
use hermsynth_core::{
    integral_matrix_d3, integral_matrix_gen3, integral_vector_d2, FarimaParams, FarimaPlan,
    HurstVector, ProcessKind, QuadratureSpec, Simulator,
};

fn farima(c: &mut Criterion) {
    let mut group = c.benchmark_group("farima");
    for span in [1usize << 12, 1 << 16] {
        let plan = FarimaPlan::new(FarimaParams::new(16, vec![0.35], span)).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(span), &plan, |b, plan| {
            let mut seed = 0;
            b.iter(|| {
                seed += 1;
                black_box(plan.generate(seed).unwrap())
            })
        });
    }
    group.finish();
}

fn tables(c: &mut Criterion) {
    let spec = QuadratureSpec::default();
    let mut group = c.benchmark_group("tables");
    group.sample_size(10);
    group.bench_function("d2_kmax16", |b| {
        b.iter(|| integral_vector_d2(black_box(0.75), 16, spec).unwrap())
    });
    group.bench_function("d3_kmax8", |b| {
        b.iter(|| integral_matrix_d3(black_box(0.8), 8, spec).unwrap())
    });
    let h = HurstVector::new(vec![0.85, 0.9, 0.95]).unwrap();
    group.bench_function("gen3_kmax8", |b| {
        b.iter(|| integral_matrix_gen3(black_box(&h), 8, spec).unwrap())
    });
    group.finish();
}

fn paths(c: &mut Criterion) {
    let mut group = c.benchmark_group("path_j12");
    group.sample_size(20);
    for kind in ProcessKind::ALL {
        let sim = Simulator::new(bench_config(kind)).unwrap();
        group.bench_function(kind.name(), |b| {
            let mut seed = 0;
            b.iter(|| {
                seed += 1;
                black_box(sim.path(seed).unwrap())
            })
        });
    }
    group.finish();
}

criterion_group!(benches, farima, tables, paths);
criterion_main!(benches);
