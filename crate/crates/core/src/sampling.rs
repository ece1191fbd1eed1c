//! Bernoulli tensors, Erdős–Rényi hypergraphs and uniform sparsification.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::rng::{keyed_uniform, Domain, SeedSpec};
use crate::tensor::{ProbabilityModel, SparseTensor, TensorShape};

/// How a homogeneous Bernoulli tensor is drawn.
///
/// Both paths have the same distribution but are not bit-identical. `Keyed`
/// decides every coordinate from `(seed, coordinate)` and is the canonical
/// path; `GeometricSkip` jumps between successes and costs `O(nnz)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplingPath {
    GeometricSkip,
    Keyed { parallel: bool },
}

/// Draws `t_c ~ Bernoulli(p_c)` independently for every coordinate.
/// Homogeneous models use geometric skipping, dense models the keyed path.
pub fn bernoulli_sample(shape: TensorShape, model: &ProbabilityModel, seed: SeedSpec) -> Result<SparseTensor> {
    let path = match model {
        ProbabilityModel::Homogeneous(_) => SamplingPath::GeometricSkip,
        ProbabilityModel::Dense(_) => SamplingPath::Keyed { parallel: false },
    };
    bernoulli_sample_with(shape, model, seed, path)
}

pub fn bernoulli_sample_with(
    shape: TensorShape,
    model: &ProbabilityModel,
    seed: SeedSpec,
    path: SamplingPath,
) -> Result<SparseTensor> {
    model.check_shape(&shape)?;
    let total = u64::try_from(shape.cells())
        .map_err(|_| Error::InvalidShape(format!("{shape:?} has more than 2^64 cells")))?;
    match (path, model) {
        (SamplingPath::GeometricSkip, ProbabilityModel::Homogeneous(p)) => Ok(geometric_skip(shape, total, *p, seed)),
        (SamplingPath::GeometricSkip, ProbabilityModel::Dense(_)) => {
            Err(Error::OutOfRange("geometric skipping needs a homogeneous model".into()))
        }
        (SamplingPath::Keyed { parallel }, _) => Ok(keyed(shape, model, seed, parallel)),
    }
}

fn geometric_skip(shape: TensorShape, total: u64, p: f64, seed: SeedSpec) -> SparseTensor {
    if p <= 0.0 {
        return SparseTensor::zeros(shape);
    }
    let k = shape.order();
    let mut coords = Vec::new();
    let mut coord = vec![0u32; k];
    if p >= 1.0 {
        for idx in 0..total {
            shape.coord_of(idx, &mut coord);
            coords.extend_from_slice(&coord);
        }
    } else {
        let mut rng = seed.rng(Domain::BernoulliSkip, 0);
        let log_q = (-p).ln_1p();
        // next candidate index; gaps are Geometric(p) on {0, 1, ...}
        let mut next: u64 = 0;
        loop {
            let u: f64 = 1.0 - rng.gen::<f64>();
            let gap = (u.ln() / log_q).floor();
            if gap >= (total - next) as f64 {
                break;
            }
            let idx = next + gap as u64;
            shape.coord_of(idx, &mut coord);
            coords.extend_from_slice(&coord);
            next = idx + 1;
            if next >= total {
                break;
            }
        }
    }
    let nnz = coords.len() / k;
    SparseTensor::from_sorted_parts(shape, coords, vec![1.0; nnz])
}

fn keyed_slab(shape: TensorShape, model: &ProbabilityModel, key: u64, first: u32) -> Vec<u32> {
    let k = shape.order();
    let n = shape.dim() as u64;
    let per_slab = n.pow(k as u32 - 1);
    let mut coords = Vec::new();
    let mut coord = vec![0u32; k];
    for rest in 0..per_slab {
        shape.coord_of(first as u64 * per_slab + rest, &mut coord);
        if keyed_uniform(key, &coord) < model.prob_at(&coord) {
            coords.extend_from_slice(&coord);
        }
    }
    coords
}

fn keyed(shape: TensorShape, model: &ProbabilityModel, seed: SeedSpec, parallel: bool) -> SparseTensor {
    let key = seed.key(Domain::Bernoulli);
    let n = shape.dim() as u32;
    let coords: Vec<u32> = if parallel {
        (0..n)
            .into_par_iter()
            .map(|i| keyed_slab(shape, model, key, i))
            .collect::<Vec<_>>()
            .concat()
    } else {
        (0..n).flat_map(|i| keyed_slab(shape, model, key, i)).collect()
    };
    let nnz = coords.len() / shape.order();
    SparseTensor::from_sorted_parts(shape, coords, vec![1.0; nnz])
}

/// Keeps each entry independently with probability `p`, values unchanged.
pub fn sparsify_uniform(t: &SparseTensor, p: f64, seed: SeedSpec) -> Result<SparseTensor> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange(format!("sampling probability {p} not in [0, 1]")));
    }
    let key = seed.key(Domain::Sparsify);
    Ok(t.filter(|c, _| keyed_uniform(key, c) < p))
}

/// k-uniform Erdős–Rényi hypergraph: every k-subset of `[n]` is an edge
/// independently with probability `p`.
pub fn er_hypergraph(k: usize, n: usize, p: f64, seed: SeedSpec) -> Result<Hypergraph> {
    if k > n {
        return Err(Error::OutOfRange(format!("edge size {k} exceeds vertex count {n}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange(format!("edge probability {p} not in [0, 1]")));
    }
    let key = seed.key(Domain::Hyperedge);
    let mut edges = Vec::new();
    if k > 0 && p > 0.0 {
        let mut comb: Vec<u32> = (0..k as u32).collect();
        loop {
            if keyed_uniform(key, &comb) < p {
                edges.push(comb.clone());
            }
            // next k-subset in lexicographic order
            let mut j = k;
            loop {
                if j == 0 {
                    return Hypergraph::new(k, n, edges);
                }
                j -= 1;
                if (comb[j] as usize) < n - k + j {
                    break;
                }
            }
            comb[j] += 1;
            for r in j + 1..k {
                comb[r] = comb[r - 1] + 1;
            }
        }
    }
    Hypergraph::new(k, n, edges)
}
