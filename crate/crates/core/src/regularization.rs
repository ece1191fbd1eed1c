//! Tuple degrees and degree-threshold regularization.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{check_symmetric, next_permutation};
use crate::tensor::{SparseTensor, TensorShape};

/// Degrees of the `(k-m)`-prefixes of a tensor: `d_{i_1..i_{k-m}}` is the sum
/// of the entries extending that prefix. Only nonzero prefixes are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeMap {
    prefix_order: usize,
    prefixes: Vec<u32>,
    degrees: Vec<f64>,
}

impl DegreeMap {
    pub fn prefix_order(&self) -> usize {
        self.prefix_order
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[u32], f64)> + '_ {
        self.prefixes.chunks_exact(self.prefix_order).zip(self.degrees.iter().copied())
    }

    pub fn get(&self, prefix: &[u32]) -> f64 {
        let l = self.prefix_order;
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.prefixes[mid * l..(mid + 1) * l].cmp(prefix) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return self.degrees[mid],
            }
        }
        0.0
    }

    pub fn max(&self) -> f64 {
        self.degrees.iter().copied().fold(0.0, f64::max)
    }

    pub fn total(&self) -> f64 {
        self.degrees.iter().sum()
    }
}

fn check_m(k: usize, m: usize) -> Result<()> {
    if m == 0 || m >= k {
        return Err(Error::OutOfRange(format!("m = {m} not in [1, {}]", k - 1)));
    }
    Ok(())
}

/// One pass over the sorted entries; prefixes are contiguous.
pub fn degree_map(t: &SparseTensor, m: usize) -> Result<DegreeMap> {
    check_m(t.order(), m)?;
    let l = t.order() - m;
    let mut prefixes: Vec<u32> = Vec::new();
    let mut degrees: Vec<f64> = Vec::new();
    for (c, v) in t.iter() {
        let pre = &c[..l];
        let len = prefixes.len();
        if len > 0 && &prefixes[len - l..] == pre {
            *degrees.last_mut().expect("nonempty") += v;
        } else {
            prefixes.extend_from_slice(pre);
            degrees.push(v);
        }
    }
    Ok(DegreeMap { prefix_order: l, prefixes, degrees })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegularizationResult {
    pub regularized: SparseTensor,
    /// Removed `(k-m)`-prefixes, sorted.
    pub removed: Vec<Vec<u32>>,
    /// `2n^m p`.
    pub threshold: f64,
    pub m: usize,
    /// False when `m` lies outside `[k/2, k-1]`, where no guarantee applies.
    pub in_regime: bool,
}

/// Drops every entry whose `(k-m)`-prefix has degree strictly above `2n^m p`.
pub fn regularize(t: &SparseTensor, m: usize, p: f64) -> Result<RegularizationResult> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::OutOfRange(format!("p = {p} not in (0, 1]")));
    }
    let k = t.order();
    let degrees = degree_map(t, m)?;
    let threshold = 2.0 * (t.dim() as f64).powi(m as i32) * p;
    let removed: Vec<Vec<u32>> = degrees.iter().filter(|(_, d)| *d > threshold).map(|(c, _)| c.to_vec()).collect();
    let l = k - m;
    let regularized = if removed.is_empty() {
        t.clone()
    } else {
        t.filter(|c, _| removed.binary_search_by(|r| r.as_slice().cmp(&c[..l])).is_err())
    };
    Ok(RegularizationResult { regularized, removed, threshold, m, in_regime: 2 * m >= k })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RemovedCount {
    pub count: usize,
    /// `1 / (n^{2m-k} p)`.
    pub bound: f64,
    pub within: bool,
}

pub fn removed_count_check(result: &RegularizationResult, n: usize, p: f64) -> RemovedCount {
    let k = result.regularized.order() as i32;
    let bound = 1.0 / ((n as f64).powi(2 * result.m as i32 - k) * p);
    let count = result.removed.len();
    RemovedCount { count, bound, within: count as f64 <= bound }
}

/// Bounded-degree expander from a symmetric adjacency tensor: keep strictly
/// increasing coordinates, zero every first index whose degree exceeds
/// `2n^{k-1}p`, then symmetrize over all `k!` orderings.
pub fn expander_construct(t: &SparseTensor, p: f64) -> Result<SparseTensor> {
    check_symmetric(t)?;
    let (k, n) = (t.order(), t.dim());
    let increasing = t.filter(|c, _| c.windows(2).all(|w| w[0] < w[1]));
    let threshold = 2.0 * (n as f64).powi(k as i32 - 1) * p;
    let mut first_degree = vec![0.0; n];
    for (c, v) in increasing.iter() {
        first_degree[c[0] as usize] += v;
    }
    let kept = increasing.filter(|c, _| first_degree[c[0] as usize] <= threshold);
    let mut entries = Vec::with_capacity(kept.nnz() * (1..=k).product::<usize>());
    for (c, v) in kept.iter() {
        let mut perm = c.to_vec();
        loop {
            entries.push((perm.clone(), v));
            if !next_permutation(&mut perm) {
                break;
            }
        }
    }
    let out = SparseTensor::from_entries(TensorShape::new(k, n)?, entries)?;
    assert!(out.is_binary(), "symmetrization produced a value outside {{0, 1}}");
    Ok(out)
}
