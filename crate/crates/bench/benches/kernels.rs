use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use tensorconc_core::{
    adjacency, balanced_partition, bernoulli_sample, center, er_hypergraph, hopm_lower, matrix_op_norm,
    multilinear_form, unfold, EdgeCounter, OffsetTensor, PowerIterConfig, ProbabilityModel, SeedSpec, TensorShape,
    VectorTuple,
};

fn sample(k: usize, n: usize) -> OffsetTensor {
    let p = 5.0 * (n as f64).ln() / (n as f64).powi(k as i32 / 2);
    let model = ProbabilityModel::homogeneous(p.min(1.0)).unwrap();
    let t = bernoulli_sample(TensorShape::new(k, n).unwrap(), &model, SeedSpec::new(1, 0)).unwrap();
    center(&t, &model).unwrap()
}

fn sampling(c: &mut Criterion) {
    let mut g = c.benchmark_group("bernoulli_sample");
    for n in [50, 100, 200] {
        let model = ProbabilityModel::homogeneous(5.0 * (n as f64).ln() / n as f64).unwrap();
        let shape = TensorShape::new(3, n).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| bernoulli_sample(shape, &model, SeedSpec::new(1, 0)).unwrap())
        });
    }
    g.finish();
}

fn form(c: &mut Criterion) {
    let mut g = c.benchmark_group("multilinear_form");
    for n in [50, 100, 200] {
        let w = sample(3, n);
        let xs = VectorTuple::new(vec![vec![1.0 / (n as f64).sqrt(); n]; 3]).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| multilinear_form(black_box(&w), &xs).unwrap())
        });
    }
    g.finish();
}

fn unfolded_norm(c: &mut Criterion) {
    let mut g = c.benchmark_group("unfold_op_norm");
    g.sample_size(10);
    let cfg = PowerIterConfig::with_seed(SeedSpec::new(2, 0));
    for n in [30, 60] {
        let w = sample(3, n);
        let part = balanced_partition(3, 2).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| {
                let m = unfold(&w, &part).unwrap().to_matrix().unwrap();
                matrix_op_norm(&m, &cfg).unwrap().value
            })
        });
    }
    g.finish();
}

fn hopm(c: &mut Criterion) {
    let mut g = c.benchmark_group("hopm_lower");
    g.sample_size(10);
    let cfg = PowerIterConfig::with_seed(SeedSpec::new(3, 0));
    for n in [30, 60] {
        let w = sample(3, n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| b.iter(|| hopm_lower(&w, &cfg).unwrap().value));
    }
    g.finish();
}

fn edge_counter(c: &mut Criterion) {
    let mut g = c.benchmark_group("edge_counter");
    for n in [60, 120] {
        let p = 40.0 * (n as f64).ln() / (n * n) as f64;
        let a = adjacency(&er_hypergraph(3, n, p, SeedSpec::new(4, 0)).unwrap());
        let counter = EdgeCounter::new(&a).unwrap();
        let half: Vec<u32> = (0..n as u32 / 2).collect();
        let sets = vec![half.clone(), (0..n as u32).step_by(3).collect(), half];
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| b.iter(|| counter.count(&sets).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, sampling, form, unfolded_norm, hopm, edge_counter);
criterion_main!(benches);
