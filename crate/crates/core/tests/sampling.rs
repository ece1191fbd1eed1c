use tensorconc_core::{
    bernoulli_sample, bernoulli_sample_with, er_hypergraph, sparsify_uniform, DenseTensor, ProbabilityModel,
    SamplingPath, SeedSpec, SparseTensor, TensorShape,
};

#[test]
fn same_seed_same_tensor() {
    let s = TensorShape::new(3, 30).unwrap();
    let m = ProbabilityModel::homogeneous(0.05).unwrap();
    let a = bernoulli_sample(s, &m, SeedSpec::new(7, 1)).unwrap();
    let b = bernoulli_sample(s, &m, SeedSpec::new(7, 1)).unwrap();
    let c = bernoulli_sample(s, &m, SeedSpec::new(7, 2)).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert!(a.is_binary());
}

#[test]
fn keyed_path_is_thread_independent() {
    let s = TensorShape::new(3, 25).unwrap();
    let m = ProbabilityModel::homogeneous(0.1).unwrap();
    let seed = SeedSpec::new(11, 3);
    let serial = bernoulli_sample_with(s, &m, seed, SamplingPath::Keyed { parallel: false }).unwrap();
    let parallel = bernoulli_sample_with(s, &m, seed, SamplingPath::Keyed { parallel: true }).unwrap();
    assert_eq!(serial, parallel);
}

#[test]
fn sample_density_matches_p() {
    let s = TensorShape::new(3, 100).unwrap();
    let p = 0.02;
    let t = bernoulli_sample(s, &ProbabilityModel::homogeneous(p).unwrap(), SeedSpec::new(1, 0)).unwrap();
    let mean = 1e6 * p;
    let sd = (1e6 * p * (1.0 - p)).sqrt();
    assert!((t.nnz() as f64 - mean).abs() < 5.0 * sd, "nnz {}", t.nnz());
}

#[test]
fn degenerate_probabilities() {
    let s = TensorShape::new(2, 6).unwrap();
    let zero = bernoulli_sample(s, &ProbabilityModel::homogeneous(0.0).unwrap(), SeedSpec::new(0, 0)).unwrap();
    assert!(zero.is_empty());
    let one = bernoulli_sample(s, &ProbabilityModel::homogeneous(1.0).unwrap(), SeedSpec::new(0, 0)).unwrap();
    assert_eq!(one.nnz(), 36);
    assert!(ProbabilityModel::homogeneous(1.5).is_err());
}

#[test]
fn dense_model_respects_zero_and_one_cells() {
    let s = TensorShape::new(2, 3).unwrap();
    let probs = DenseTensor::new(s, vec![1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
    let m = ProbabilityModel::dense(probs).unwrap();
    let t = bernoulli_sample(s, &m, SeedSpec::new(5, 5)).unwrap();
    let coords: Vec<Vec<u32>> = t.iter().map(|(c, _)| c.to_vec()).collect();
    assert_eq!(coords, vec![vec![0, 0], vec![0, 2], vec![1, 1], vec![2, 2]]);
}

#[test]
fn sparsify_keeps_a_subset() {
    let s = TensorShape::new(3, 10).unwrap();
    let t = SparseTensor::ones(s).unwrap();
    let kept = sparsify_uniform(&t, 0.3, SeedSpec::new(2, 0)).unwrap();
    assert!(kept.nnz() > 200 && kept.nnz() < 400);
    assert!(kept.iter().all(|(c, v)| t.get(c) == v));
    assert_eq!(sparsify_uniform(&t, 1.0, SeedSpec::new(2, 0)).unwrap(), t);
}

#[test]
fn er_hypergraph_edges_are_sets() {
    let h = er_hypergraph(3, 15, 0.2, SeedSpec::new(4, 0)).unwrap();
    assert!(h.edges().iter().all(|e| e.windows(2).all(|w| w[0] < w[1])));
    let again = er_hypergraph(3, 15, 0.2, SeedSpec::new(4, 0)).unwrap();
    assert_eq!(h, again);
    assert!(h.num_edges() > 0 && h.num_edges() < 455);
}
