//! k-uniform hypergraphs, ordered hyperedge counts and mixing checks.
//!
//! Counts are over ordered tuples `(v_1, ..., v_k) ∈ V_1 × ... × V_k`, so the
//! adjacency tensor of `H` gives `e([n], ..., [n]) = k!·|E|`.

use std::fmt::Write as _;

use rand::seq::index::sample;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::{Domain, SeedSpec};
use crate::spectral::{matrix_op_norm, PowerIterConfig, SparseMatrix};
use crate::tensor::{format_sig17, SparseTensor, TensorShape};

/// Family evaluations allowed before switching from enumeration to sampling.
pub const EXHAUSTIVE_LIMIT: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    k: usize,
    n: usize,
    edges: Vec<Vec<u32>>,
}

/// Advances `v` to the next lexicographic permutation; false once `v` was
/// the last one (and leaves it sorted ascending again).
pub(crate) fn next_permutation(v: &mut [u32]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        v.reverse();
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

impl Hypergraph {
    /// Edges are 0-based, strictly increasing vertex tuples.
    pub fn new(k: usize, n: usize, mut edges: Vec<Vec<u32>>) -> Result<Self> {
        if k < 2 || k > n {
            return Err(Error::OutOfRange(format!("edge size {k} invalid for {n} vertices")));
        }
        for e in &edges {
            if e.len() != k {
                return Err(Error::DimensionMismatch(format!("edge {e:?} does not have {k} vertices")));
            }
            if e.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidShape(format!("edge {e:?} is not strictly increasing")));
            }
            if e[k - 1] as usize >= n {
                return Err(Error::CoordinateOutOfRange {
                    coord: e.iter().map(|&v| v as u64 + 1).collect(),
                    dims: vec![n as u64; k],
                });
            }
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateCoordinate(w[0].clone()));
        }
        Ok(Self { k, n, edges })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Vec<u32>] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Vertex degrees (number of edges containing each vertex).
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for e in &self.edges {
            for &v in e {
                d[v as usize] += 1;
            }
        }
        d
    }

    /// Header `k n m`, then one 1-based edge per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.k, self.n, self.edges.len());
        for e in &self.edges {
            let line: Vec<String> = e.iter().map(|v| (v + 1).to_string()).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
        let head: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse { line: 1, msg: format!("bad header field {t:?}") }))
            .collect::<Result<_>>()?;
        let [k, n, m] = head[..] else {
            return Err(Error::Parse { line: 1, msg: "header must be `k n m`".into() });
        };
        let mut edges = Vec::with_capacity(m);
        for (i, line) in lines {
            let e: Vec<u32> = line
                .split_whitespace()
                .map(|t| match t.parse::<u32>() {
                    Ok(v) if v >= 1 => Ok(v - 1),
                    _ => Err(Error::Parse { line: i + 1, msg: format!("bad vertex {t:?}") }),
                })
                .collect::<Result<_>>()?;
            edges.push(e);
        }
        if edges.len() != m {
            return Err(Error::Parse { line: 1, msg: format!("header promises {m} edges, found {}", edges.len()) });
        }
        Self::new(k, n, edges)
    }

    /// Reads the edge set off a symmetric 0/1 tensor that vanishes on
    /// repeated-index coordinates.
    pub fn from_symmetric_tensor(t: &SparseTensor) -> Result<Self> {
        check_symmetric(t)?;
        let edges = t
            .iter()
            .filter(|(c, _)| c.windows(2).all(|w| w[0] < w[1]))
            .map(|(c, _)| c.to_vec())
            .collect();
        Self::new(t.order(), t.dim(), edges)
    }
}

/// Errors unless `t` is a symmetric 0/1 tensor with no repeated-index entries.
pub(crate) fn check_symmetric(t: &SparseTensor) -> Result<()> {
    if !t.is_binary() {
        return Err(Error::OutOfRange("adjacency tensors must be 0/1 valued".into()));
    }
    let mut perm = Vec::with_capacity(t.order());
    for (c, v) in t.iter() {
        perm.clear();
        perm.extend_from_slice(c);
        perm.sort_unstable();
        if perm.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::NotSymmetric(c.to_vec()));
        }
        loop {
            if t.get(&perm) != v {
                return Err(Error::NotSymmetric(perm.clone()));
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
    }
    Ok(())
}

/// Symmetric adjacency tensor: every edge contributes its `k!` orderings.
pub fn adjacency(h: &Hypergraph) -> SparseTensor {
    let shape = TensorShape::new(h.k, h.n).expect("valid hypergraph shape");
    let mut entries = Vec::new();
    for e in &h.edges {
        let mut p = e.clone();
        loop {
            entries.push((p.clone(), 1.0));
            if !next_permutation(&mut p) {
                break;
            }
        }
    }
    SparseTensor::from_entries(shape, entries).expect("distinct edges give distinct coordinates")
}

/// Fast repeated `e(V_1, ..., V_k)` queries for one 0/1 tensor: entries are
/// grouped by their `(k-1)`-prefix with the last index stored as a bitset.
#[derive(Debug, Clone)]
pub struct EdgeCounter {
    k: usize,
    n: usize,
    words: usize,
    /// Flat `(k-1)`-prefixes, sorted.
    prefixes: Vec<u32>,
    bits: Vec<u64>,
    /// Prefix range for each first index.
    first: Vec<usize>,
}

fn membership(n: usize, set: &[u32]) -> Result<Vec<bool>> {
    if set.is_empty() {
        return Err(Error::OutOfRange("vertex subsets must be nonempty".into()));
    }
    let mut mask = vec![false; n];
    for &v in set {
        if v as usize >= n {
            return Err(Error::CoordinateOutOfRange { coord: vec![v as u64 + 1], dims: vec![n as u64] });
        }
        mask[v as usize] = true;
    }
    Ok(mask)
}

impl EdgeCounter {
    pub fn new(t: &SparseTensor) -> Result<Self> {
        if !t.is_binary() {
            return Err(Error::OutOfRange("edge counts need a 0/1 tensor".into()));
        }
        let (k, n) = (t.order(), t.dim());
        let words = n.div_ceil(64);
        let mut prefixes: Vec<u32> = Vec::new();
        let mut bits: Vec<u64> = Vec::new();
        for (c, _) in t.iter() {
            let pre = &c[..k - 1];
            let len = prefixes.len();
            if len == 0 || &prefixes[len - (k - 1)..] != pre {
                prefixes.extend_from_slice(pre);
                bits.extend(std::iter::repeat_n(0, words));
            }
            let last = c[k - 1] as usize;
            let base = bits.len() - words;
            bits[base + last / 64] |= 1 << (last % 64);
        }
        let count = prefixes.len() / (k - 1);
        let mut first = vec![0usize; n + 1];
        for p in 0..count {
            first[prefixes[p * (k - 1)] as usize + 1] += 1;
        }
        for i in 0..n {
            first[i + 1] += first[i];
        }
        Ok(Self { k, n, words, prefixes, bits, first })
    }

    pub fn order(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Ordered count of tuples in `V_1 × ... × V_k` carrying an entry.
    pub fn count(&self, sets: &[Vec<u32>]) -> Result<u64> {
        if sets.len() != self.k {
            return Err(Error::DimensionMismatch(format!("{} subsets for order {}", sets.len(), self.k)));
        }
        if has_duplicates(&sets[0]) {
            return self.count(&dedup_first(sets));
        }
        let masks = sets.iter().map(|s| membership(self.n, s)).collect::<Result<Vec<_>>>()?;
        let mut last = vec![0u64; self.words];
        for (i, &m) in masks[self.k - 1].iter().enumerate() {
            if m {
                last[i / 64] |= 1 << (i % 64);
            }
        }
        let km = self.k - 1;
        let mut total = 0u64;
        for &i1 in &sets[0] {
            let i1 = i1 as usize;
            if !masks[0][i1] {
                continue;
            }
            for p in self.first[i1]..self.first[i1 + 1] {
                let pre = &self.prefixes[p * km..(p + 1) * km];
                if (1..km).all(|j| masks[j][pre[j] as usize]) {
                    let row = &self.bits[p * self.words..(p + 1) * self.words];
                    total += row.iter().zip(&last).map(|(a, b)| (a & b).count_ones() as u64).sum::<u64>();
                }
            }
        }
        Ok(total)
    }
}

fn has_duplicates(set: &[u32]) -> bool {
    let mut s = set.to_vec();
    s.sort_unstable();
    s.windows(2).any(|w| w[0] == w[1])
}

fn dedup_first(sets: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut out = sets.to_vec();
    out[0].sort_unstable();
    out[0].dedup();
    out
}

/// `e(V_1, ..., V_k)`: number of ordered tuples in the product of the sets
/// at which the 0/1 tensor `t` is 1. Equals `T(1_{V_1}, ..., 1_{V_k})`.
pub fn count_edges(t: &SparseTensor, sets: &[Vec<u32>]) -> Result<u64> {
    if sets.len() != t.order() {
        return Err(Error::DimensionMismatch(format!("{} subsets for order {}", sets.len(), t.order())));
    }
    if !t.is_binary() {
        return Err(Error::OutOfRange("edge counts need a 0/1 tensor".into()));
    }
    let masks = sets.iter().map(|s| membership(t.dim(), s)).collect::<Result<Vec<_>>>()?;
    Ok(t.iter()
        .filter(|(c, _)| c.iter().zip(&masks).all(|(&i, m)| m[i as usize]))
        .count() as u64)
}

/// How subset tuples are chosen for a mixing or discrepancy check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(default)]
pub struct FamilySpec {
    /// Sampled tuples when enumeration is too large.
    pub samples: usize,
    /// Take every tuple of nonempty subsets when there are at most
    /// [`EXHAUSTIVE_LIMIT`] of them.
    pub allow_exhaustive: bool,
}

impl Default for FamilySpec {
    fn default() -> Self {
        Self { samples: 2000, allow_exhaustive: true }
    }
}

/// `(2^n - 1)^k` when it fits under the exhaustive limit.
fn exhaustive_count(k: usize, n: usize) -> Option<u64> {
    if n >= 17 {
        return None;
    }
    let per = (1u64 << n) - 1;
    let mut total = 1u64;
    for _ in 0..k {
        total = total.checked_mul(per)?;
        if total > EXHAUSTIVE_LIMIT {
            return None;
        }
    }
    Some(total)
}

fn subset_of_mask(mask: u64) -> Vec<u32> {
    (0..64).filter(|b| mask >> b & 1 == 1).collect()
}

/// Subset size log-uniform on `[1, n]`, members uniform without replacement.
pub(crate) fn random_subset(rng: &mut impl Rng, n: usize) -> Vec<u32> {
    let u: f64 = rng.gen();
    let size = ((u * ((n + 1) as f64).ln()).exp().floor() as usize).clamp(1, n);
    let mut s: Vec<u32> = sample(rng, n, size).into_iter().map(|v| v as u32).collect();
    s.sort_unstable();
    s
}

/// Either all tuples of nonempty subsets or `spec.samples` random ones,
/// visited in a deterministic order.
pub(crate) fn for_each_family(
    k: usize,
    n: usize,
    spec: &FamilySpec,
    seed: SeedSpec,
    mut f: impl FnMut(&[Vec<u32>]) -> Result<()>,
) -> Result<bool> {
    if spec.allow_exhaustive {
        if let Some(total) = exhaustive_count(k, n) {
            let per = (1u64 << n) - 1;
            for idx in 0..total {
                let mut rest = idx;
                let sets: Vec<Vec<u32>> = (0..k)
                    .map(|_| {
                        let m = rest % per + 1;
                        rest /= per;
                        subset_of_mask(m)
                    })
                    .collect();
                f(&sets)?;
            }
            return Ok(true);
        }
    }
    let mut rng = seed.rng(Domain::Families, 0);
    for _ in 0..spec.samples {
        let sets: Vec<Vec<u32>> = (0..k).map(|_| random_subset(&mut rng, n)).collect();
        f(&sets)?;
    }
    Ok(false)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixingTrial {
    pub sizes: Vec<usize>,
    pub count: u64,
    /// `p·∏|V_i|`.
    pub expected: f64,
    /// `|e - p∏|V_i|| / √(∏|V_i|)`.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixingReport {
    pub trials: Vec<MixingTrial>,
    /// Largest ratio over `trials` and the singleton tuples.
    pub max_ratio: f64,
    /// `max_ratio / √c` with `c = p·n^{k-1}`.
    pub fitted_c: f64,
    pub c: f64,
    pub p: f64,
    /// Max ratio over all `n^k` singleton tuples, `|t'_v - p|`.
    pub singleton_max: f64,
    pub exhaustive: bool,
    pub seed: SeedSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixingSummary {
    pub max_ratio: f64,
    pub fitted_c: f64,
    pub trials: usize,
    pub seed: SeedSpec,
}

impl MixingReport {
    pub fn summary(&self) -> MixingSummary {
        MixingSummary { max_ratio: self.max_ratio, fitted_c: self.fitted_c, trials: self.trials.len(), seed: self.seed }
    }

    /// One row per trial: `trial,sizes,count,expected,ratio`, sizes joined by `x`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("trial,sizes,count,expected,ratio\n");
        for (i, t) in self.trials.iter().enumerate() {
            let sizes: Vec<String> = t.sizes.iter().map(usize::to_string).collect();
            let _ = writeln!(
                s,
                "{i},{},{},{},{}",
                sizes.join("x"),
                t.count,
                format_sig17(t.expected),
                format_sig17(t.ratio)
            );
        }
        s
    }
}

/// Empirical check of `|e(V_1..V_k) - p∏|V_i|| ≤ C√c·√(∏|V_i|)` on `t`.
pub fn mixing_check(t: &SparseTensor, p: f64, spec: &FamilySpec, seed: SeedSpec) -> Result<MixingReport> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::OutOfRange(format!("mixing probability {p} not in (0, 1)")));
    }
    let counter = EdgeCounter::new(t)?;
    let (k, n) = (t.order(), t.dim());
    let mut trials = Vec::new();
    let exhaustive = for_each_family(k, n, spec, seed, |sets| {
        let count = counter.count(sets)?;
        let sizes: Vec<usize> = sets.iter().map(Vec::len).collect();
        let prod: f64 = sizes.iter().map(|&s| s as f64).product();
        let expected = p * prod;
        trials.push(MixingTrial { sizes, count, expected, ratio: (count as f64 - expected).abs() / prod.sqrt() });
        Ok(())
    })?;
    let cells = t.shape().cells();
    let singleton_max = match (t.nnz() > 0, (t.nnz() as u128) < cells) {
        (true, true) => (1.0 - p).max(p),
        (true, false) => 1.0 - p,
        (false, _) => p,
    };
    let max_ratio = trials.iter().map(|t| t.ratio).fold(singleton_max, f64::max);
    let c = p * (n as f64).powi(k as i32 - 1);
    Ok(MixingReport { trials, max_ratio, fitted_c: max_ratio / c.sqrt(), c, p, singleton_max, exhaustive, seed })
}

/// Result of the `k = 2` expander mixing inequality check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixMixingReport {
    /// `‖A - (d/n)J‖`.
    pub lambda: f64,
    pub pairs: usize,
    /// Max of `|e(V_1,V_2) - d|V_1||V_2|/n| - λ√(|V_1||V_2|(1-|V_1|/n)(1-|V_2|/n))`.
    pub max_excess: f64,
    pub violations: usize,
    pub exhaustive: bool,
}

/// Slack allowed above the classical bound before a pair counts as a violation.
pub const MIXING_SLACK: f64 = 1e-6;

pub fn matrix_mixing_check(
    g: &Hypergraph,
    d: f64,
    spec: &FamilySpec,
    seed: SeedSpec,
    power: &PowerIterConfig,
) -> Result<MatrixMixingReport> {
    if g.k() != 2 {
        return Err(Error::DimensionMismatch(format!("matrix mixing needs a graph, got {}-uniform", g.k())));
    }
    let n = g.n();
    let a = adjacency(g);
    let bg = -d / n as f64;
    let triplets = a.iter().map(|(c, v)| (c[0] as usize, c[1] as usize, v));
    let m = SparseMatrix::from_sorted_triplets(n, n, triplets, bg)?;
    let lambda = matrix_op_norm(&m, power)?.value;
    let counter = EdgeCounter::new(&a)?;
    let nf = n as f64;
    let (mut pairs, mut violations, mut max_excess) = (0, 0, f64::NEG_INFINITY);
    let exhaustive = for_each_family(2, n, spec, seed, |sets| {
        let e = counter.count(sets)? as f64;
        let (s1, s2) = (sets[0].len() as f64, sets[1].len() as f64);
        let bound = lambda * (s1 * s2 * (1.0 - s1 / nf) * (1.0 - s2 / nf)).max(0.0).sqrt();
        let excess = (e - d * s1 * s2 / nf).abs() - bound;
        pairs += 1;
        max_excess = f64::max(max_excess, excess);
        if excess > MIXING_SLACK * (1.0 + bound) {
            violations += 1;
        }
        Ok(())
    })?;
    Ok(MatrixMixingReport { lambda, pairs, max_excess, violations, exhaustive })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutations_cycle() {
        let mut v = vec![0, 1, 2];
        let mut seen = vec![v.clone()];
        while next_permutation(&mut v) {
            seen.push(v.clone());
        }
        assert_eq!(seen.len(), 6);
        assert_eq!(v, vec![0, 1, 2]);
        assert_eq!(seen[1], vec![0, 2, 1]);
    }

    #[test]
    fn construction_validates() {
        assert!(Hypergraph::new(3, 5, vec![vec![0, 2, 1]]).is_err());
        assert!(Hypergraph::new(3, 5, vec![vec![0, 1, 5]]).is_err());
        assert!(Hypergraph::new(3, 5, vec![vec![0, 1, 2], vec![0, 1, 2]]).is_err());
        assert!(Hypergraph::new(6, 5, vec![]).is_err());
        let h = Hypergraph::new(3, 5, vec![vec![1, 2, 3], vec![0, 1, 2]]).unwrap();
        assert_eq!(h.edges()[0], vec![0, 1, 2]);
        assert_eq!(h.degrees(), vec![1, 2, 2, 1, 0]);
    }

    #[test]
    fn text_round_trip() {
        let h = Hypergraph::new(3, 6, vec![vec![0, 1, 2], vec![1, 4, 5]]).unwrap();
        let s = h.to_text();
        assert_eq!(s, "3 6 2\n1 2 3\n2 5 6\n");
        assert_eq!(Hypergraph::from_text(&s).unwrap(), h);
        assert!(Hypergraph::from_text("3 6 2\n1 2 3\n").is_err());
        assert!(Hypergraph::from_text("3 6 1\n0 2 3\n").is_err());
    }

    #[test]
    fn adjacency_of_single_edge() {
        let h = Hypergraph::new(3, 4, vec![vec![0, 1, 2]]).unwrap();
        let t = adjacency(&h);
        assert_eq!(t.nnz(), 6);
        assert_eq!(t.get(&[2, 0, 1]), 1.0);
        assert_eq!(Hypergraph::from_symmetric_tensor(&t).unwrap(), h);
        assert!(adjacency(&Hypergraph::new(3, 4, vec![]).unwrap()).is_empty());
    }

    #[test]
    fn asymmetric_tensor_rejected() {
        let s = TensorShape::new(3, 4).unwrap();
        let t = SparseTensor::from_entries(s, vec![(vec![0, 1, 2], 1.0)]).unwrap();
        assert!(matches!(Hypergraph::from_symmetric_tensor(&t), Err(Error::NotSymmetric(_))));
        let r = SparseTensor::from_entries(s, vec![(vec![0, 0, 2], 1.0)]).unwrap();
        assert!(Hypergraph::from_symmetric_tensor(&r).is_err());
    }

    #[test]
    fn falling_factorial_count() {
        let n = 6u32;
        let s = TensorShape::new(3, n as usize).unwrap();
        let mut entries = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if a != b && b != c && a != c {
                        entries.push((vec![a, b, c], 1.0));
                    }
                }
            }
        }
        let t = SparseTensor::from_entries(s, entries).unwrap();
        let all: Vec<u32> = (0..n).collect();
        let sets = vec![all.clone(), all.clone(), all];
        assert_eq!(count_edges(&t, &sets).unwrap(), 120);
        assert_eq!(EdgeCounter::new(&t).unwrap().count(&sets).unwrap(), 120);
        assert_eq!(count_edges(&SparseTensor::zeros(s), &sets).unwrap(), 0);
        assert!(count_edges(&t, &[vec![0], vec![], vec![1]]).is_err());
    }

    #[test]
    fn counter_tolerates_duplicate_members() {
        let h = Hypergraph::new(2, 3, vec![vec![0, 1]]).unwrap();
        let c = EdgeCounter::new(&adjacency(&h)).unwrap();
        assert_eq!(c.count(&[vec![0, 0], vec![1]]).unwrap(), 1);
    }

    #[test]
    fn mixing_of_uniform_weight_is_zero_off_singletons() {
        // every distinct-index pair is an edge: K_4
        let edges: Vec<Vec<u32>> = (0..4).flat_map(|a| (a + 1..4).map(move |b| vec![a, b])).collect();
        let t = adjacency(&Hypergraph::new(2, 4, edges).unwrap());
        let r = mixing_check(&t, 0.5, &FamilySpec::default(), SeedSpec::new(1, 0)).unwrap();
        assert!(r.exhaustive);
        assert_eq!(r.trials.len(), 225);
        assert!(r.trials.iter().all(|t| t.ratio >= 0.0));
        assert!((r.singleton_max - 0.5).abs() < 1e-15);
        assert!(r.to_csv().lines().count() == 226);
    }

    #[test]
    fn mixing_is_deterministic() {
        let h = crate::sampling::er_hypergraph(3, 20, 0.05, SeedSpec::new(3, 0)).unwrap();
        let t = adjacency(&h);
        let spec = FamilySpec { samples: 100, allow_exhaustive: true };
        let a = mixing_check(&t, 0.05, &spec, SeedSpec::new(9, 0)).unwrap();
        let b = mixing_check(&t, 0.05, &spec, SeedSpec::new(9, 0)).unwrap();
        assert_eq!(a, b);
        assert!(!a.exhaustive);
        assert_eq!(a.trials.len(), 100);
    }

    #[test]
    fn complete_graph_mixing() {
        let n = 7u32;
        let edges: Vec<Vec<u32>> = (0..n).flat_map(|a| (a + 1..n).map(move |b| vec![a, b])).collect();
        let g = Hypergraph::new(2, n as usize, edges).unwrap();
        let r = matrix_mixing_check(&g, (n - 1) as f64, &FamilySpec::default(), SeedSpec::new(0, 0), &PowerIterConfig::default()).unwrap();
        assert!((r.lambda - 1.0).abs() < 1e-8);
        assert_eq!(r.violations, 0);
        assert!(r.exhaustive);
        let bad = Hypergraph::new(3, 4, vec![]).unwrap();
        assert!(matrix_mixing_check(&bad, 1.0, &FamilySpec::default(), SeedSpec::default(), &PowerIterConfig::default()).is_err());
    }
}
