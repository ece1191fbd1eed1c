//! Set partitions of the modes and the unfoldings they induce.
//!
//! A block `B = {r_1 < ... < r_s}` maps coordinates through the column-major
//! rule `m = Σ_t i_{r_t} · n^t` (0-based), so the first mode of a block is
//! the least significant digit.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::spectral::SparseMatrix;
use crate::tensor::{OffsetTensor, VectorTuple, DENSE_GATE};

/// Disjoint nonempty blocks of 0-based mode indices covering `0..k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    k: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(k: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; k];
        let mut blocks = blocks;
        for b in &mut blocks {
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            b.sort_unstable();
            for &r in b.iter() {
                if r >= k {
                    return Err(Error::InvalidPartition(format!("mode {} outside [1, {k}]", r + 1)));
                }
                if seen[r] {
                    return Err(Error::InvalidPartition(format!("mode {} appears twice", r + 1)));
                }
                seen[r] = true;
            }
        }
        if let Some(r) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("mode {} not covered", r + 1)));
        }
        Ok(Self { k, blocks })
    }

    /// Blocks given with 1-based mode indices, as in config files.
    pub fn from_one_based(k: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut zero = Vec::with_capacity(blocks.len());
        for b in blocks {
            let mut out = Vec::with_capacity(b.len());
            for r in b {
                if r == 0 {
                    return Err(Error::InvalidPartition("mode index 0 in 1-based partition".into()));
                }
                out.push(r - 1);
            }
            zero.push(out);
        }
        Self::new(k, zero)
    }

    pub fn to_one_based(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|b| b.iter().map(|r| r + 1).collect()).collect()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", serde_json_like(&self.to_one_based()))
    }
}

fn serde_json_like(blocks: &[Vec<usize>]) -> String {
    let inner: Vec<String> = blocks
        .iter()
        .map(|b| format!("[{}]", b.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    format!("[{}]", inner.join(","))
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_one_based().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let blocks = Vec::<Vec<usize>>::deserialize(d)?;
        let k = blocks.iter().map(Vec::len).sum();
        Partition::from_one_based(k, blocks).map_err(serde::de::Error::custom)
    }
}

/// `{{1..k-m}, {k-m+1..k}}`: the second block has `m` modes.
pub fn balanced_partition(k: usize, m: usize) -> Result<Partition> {
    if m == 0 || m >= k {
        return Err(Error::OutOfRange(format!("balanced partition needs 1 <= m <= k-1, got m={m}, k={k}")));
    }
    Partition::new(k, vec![(0..k - m).collect(), (k - m..k).collect()])
}

/// `⌊k/m⌋` consecutive blocks of size `m`, plus a residual block of size
/// `k mod m` when nonzero.
pub fn multiway_partition(k: usize, m: usize) -> Result<Partition> {
    if m == 0 || 2 * m >= k {
        return Err(Error::OutOfRange(format!("multiway partition needs 1 <= m < k/2, got m={m}, k={k}")));
    }
    let blocks = (0..k).step_by(m).map(|start| (start..(start + m).min(k)).collect()).collect();
    Partition::new(k, blocks)
}

fn checked_pow(n: u64, e: usize) -> Result<u64> {
    n.checked_pow(e as u32)
        .ok_or_else(|| Error::InvalidShape(format!("{n}^{e} overflows the unfolded index range")))
}

/// `φ_π` for a uniform dimension `n`, on 0-based coordinates.
pub fn phi(partition: &Partition, n: usize, coord: &[u32]) -> Result<Vec<u64>> {
    if coord.len() != partition.k() {
        return Err(Error::DimensionMismatch(format!(
            "coordinate has {} modes, partition covers {}",
            coord.len(),
            partition.k()
        )));
    }
    if coord.iter().any(|&c| c as usize >= n) {
        return Err(Error::CoordinateOutOfRange {
            coord: coord.iter().map(|&c| c as u64).collect(),
            dims: vec![n as u64; coord.len()],
        });
    }
    let n = n as u64;
    Ok(partition
        .blocks()
        .iter()
        .map(|b| {
            let mut m = 0u64;
            let mut stride = 1u64;
            for &r in b {
                m += coord[r] as u64 * stride;
                stride = stride.wrapping_mul(n);
            }
            m
        })
        .collect())
}

/// Inverse of [`phi`].
pub fn phi_inverse(partition: &Partition, n: usize, unfolded: &[u64]) -> Result<Vec<u32>> {
    if unfolded.len() != partition.len() {
        return Err(Error::DimensionMismatch(format!(
            "unfolded coordinate has {} modes, partition has {} blocks",
            unfolded.len(),
            partition.len()
        )));
    }
    let mut coord = vec![0u32; partition.k()];
    for (b, &m) in partition.blocks().iter().zip(unfolded) {
        let range = checked_pow(n as u64, b.len())?;
        if m >= range {
            return Err(Error::CoordinateOutOfRange {
                coord: unfolded.to_vec(),
                dims: partition.blocks().iter().map(|b| (n as u64).saturating_pow(b.len() as u32)).collect(),
            });
        }
        let mut rest = m;
        for &r in b {
            coord[r] = (rest % n as u64) as u32;
            rest /= n as u64;
        }
    }
    Ok(coord)
}

/// An unfolded tensor: mixed-radix coordinates over `dims`, sparse entries
/// plus the carried-over background.
#[derive(Debug, Clone, PartialEq)]
pub struct UnfoldedView {
    n: usize,
    /// Source modes feeding each view mode, least significant first.
    groups: Vec<Vec<usize>>,
    dims: Vec<u64>,
    coords: Vec<u64>,
    values: Vec<f64>,
    background: f64,
}

/// `T -> Unfold_π(T)`.
pub fn unfold(t: &OffsetTensor, partition: &Partition) -> Result<UnfoldedView> {
    if partition.k() != t.order() {
        return Err(Error::InvalidPartition(format!(
            "partition covers {} modes, tensor has order {}",
            partition.k(),
            t.order()
        )));
    }
    let n = t.dim();
    let dims = partition
        .blocks()
        .iter()
        .map(|b| checked_pow(n as u64, b.len()))
        .collect::<Result<Vec<_>>>()?;
    let l = partition.len();
    let mut rows: Vec<(Vec<u64>, f64)> = Vec::with_capacity(t.sparse().nnz());
    for (c, v) in t.sparse().iter() {
        rows.push((phi(partition, n, c)?, v));
    }
    rows.sort_by(|a, b| a.0.cmp(&b.0));
    let mut coords = Vec::with_capacity(rows.len() * l);
    let mut values = Vec::with_capacity(rows.len());
    for (c, v) in rows {
        coords.extend_from_slice(&c);
        values.push(v);
    }
    Ok(UnfoldedView {
        n,
        groups: partition.blocks().to_vec(),
        dims,
        coords,
        values,
        background: t.background(),
    })
}

impl UnfoldedView {
    pub fn order(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[u64] {
        &self.dims
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn source_dim(&self) -> usize {
        self.n
    }

    pub fn background(&self) -> f64 {
        self.background
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[u64], f64)> + '_ {
        self.coords.chunks_exact(self.order()).zip(self.values.iter().copied())
    }

    pub fn get(&self, coord: &[u64]) -> f64 {
        let l = self.order();
        let (mut lo, mut hi) = (0, self.nnz());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.coords[mid * l..(mid + 1) * l].cmp(coord) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return self.values[mid] + self.background,
            }
        }
        self.background
    }

    /// Cell count of the view.
    pub fn cells(&self) -> u128 {
        self.dims.iter().fold(1u128, |a, &d| a.saturating_mul(d as u128))
    }

    /// Same value for any view of the same tensor: the squared terms are
    /// summed in sorted order.
    pub fn frobenius_norm(&self) -> Result<f64> {
        let c = self.background;
        if c == 0.0 {
            let sq = self.values.iter().map(|v| v * v).collect();
            return Ok(crate::tensor::order_invariant_sum(sq).sqrt());
        }
        let cells = self.cells();
        if cells > DENSE_GATE as u128 {
            return Err(Error::DenseGateExceeded { cells, gate: DENSE_GATE });
        }
        let mut terms: Vec<f64> = self.values.iter().map(|v| (v + c) * (v + c)).collect();
        terms.extend(std::iter::repeat_n(c * c, cells as usize - self.nnz()));
        Ok(crate::tensor::order_invariant_sum(terms).sqrt())
    }

    /// Regroups the view's own modes; `partition` covers `0..self.order()`.
    pub fn unfold(&self, partition: &Partition) -> Result<UnfoldedView> {
        if partition.k() != self.order() {
            return Err(Error::InvalidPartition(format!(
                "partition covers {} modes, view has order {}",
                partition.k(),
                self.order()
            )));
        }
        let mut dims = Vec::with_capacity(partition.len());
        let mut groups = Vec::with_capacity(partition.len());
        for b in partition.blocks() {
            let mut d = 1u64;
            let mut g = Vec::new();
            for &j in b {
                d = d
                    .checked_mul(self.dims[j])
                    .ok_or_else(|| Error::InvalidShape("unfolded dimension overflows u64".into()))?;
                g.extend_from_slice(&self.groups[j]);
            }
            dims.push(d);
            groups.push(g);
        }
        let mut rows: Vec<(Vec<u64>, f64)> = self
            .iter()
            .map(|(c, v)| {
                let m = partition
                    .blocks()
                    .iter()
                    .map(|b| {
                        let (mut m, mut stride) = (0u64, 1u64);
                        for &j in b {
                            m += c[j] * stride;
                            stride = stride.wrapping_mul(self.dims[j]);
                        }
                        m
                    })
                    .collect();
                (m, v)
            })
            .collect();
        rows.sort_by(|a, b| a.0.cmp(&b.0));
        let l = dims.len();
        let mut coords = Vec::with_capacity(rows.len() * l);
        let mut values = Vec::with_capacity(rows.len());
        for (c, v) in rows {
            coords.extend_from_slice(&c);
            values.push(v);
        }
        Ok(UnfoldedView { n: self.n, groups, dims, coords, values, background: self.background })
    }

    /// The Kronecker product of the source-mode vectors feeding view mode
    /// `mode`, laid out in that mode's index order.
    pub fn kron_for_mode(&self, xs: &VectorTuple, mode: usize) -> Result<Vec<f64>> {
        let group = &self.groups[mode];
        let len = usize::try_from(self.dims[mode])
            .map_err(|_| Error::InvalidShape("view dimension exceeds usize".into()))?;
        if len as u64 > DENSE_GATE {
            return Err(Error::DenseGateExceeded { cells: len as u128, gate: DENSE_GATE });
        }
        let mut out = vec![1.0; len];
        let mut stride = 1usize;
        for &r in group {
            let x = xs.get(r);
            for (idx, o) in out.iter_mut().enumerate() {
                *o *= x[(idx / stride) % self.n];
            }
            stride *= self.n;
        }
        Ok(out)
    }

    /// Sparse matrix of an order-2 view.
    pub fn to_matrix(&self) -> Result<SparseMatrix> {
        if self.order() != 2 {
            return Err(Error::DimensionMismatch(format!("view of order {} is not a matrix", self.order())));
        }
        let rows = usize::try_from(self.dims[0]).map_err(|_| Error::InvalidShape("too many rows".into()))?;
        let cols = usize::try_from(self.dims[1]).map_err(|_| Error::InvalidShape("too many columns".into()))?;
        let triplets = self.iter().map(|(c, v)| (c[0] as usize, c[1] as usize, v));
        SparseMatrix::from_sorted_triplets(rows, cols, triplets, self.background)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{SparseTensor, TensorShape};

    fn p(k: usize, blocks: &[&[usize]]) -> Partition {
        Partition::from_one_based(k, blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(3, vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(Partition::new(3, vec![vec![0, 1]]).is_err());
        assert!(Partition::new(3, vec![vec![0, 1, 2], vec![]]).is_err());
        assert!(Partition::from_one_based(2, vec![vec![0, 1]]).is_err());
        let q = Partition::new(3, vec![vec![2, 0], vec![1]]).unwrap();
        assert_eq!(q.blocks(), &[vec![0, 2], vec![1]]);
    }

    #[test]
    fn partition_json_is_one_based() {
        let q = p(3, &[&[1, 2], &[3]]);
        assert_eq!(q.to_string(), "[[1,2],[3]]");
    }

    #[test]
    fn phi_examples() {
        // 1-based (2,1,2) under {{1,2},{3}} maps to (2,2).
        let q = p(3, &[&[1, 2], &[3]]);
        assert_eq!(phi(&q, 2, &[1, 0, 1]).unwrap(), vec![1, 1]);
        assert_eq!(phi(&q, 2, &[0, 0, 0]).unwrap(), vec![0, 0]);
        assert_eq!(phi_inverse(&q, 2, &[1, 1]).unwrap(), vec![1, 0, 1]);
        assert_eq!(phi_inverse(&q, 2, &[0, 0]).unwrap(), vec![0, 0, 0]);
        assert!(phi(&q, 2, &[2, 0, 0]).is_err());
        assert!(phi_inverse(&q, 2, &[4, 0]).is_err());
    }

    #[test]
    fn phi_image_is_a_bijection_onto_4x2() {
        let q = p(3, &[&[1, 2], &[3]]);
        let mut seen = std::collections::BTreeSet::new();
        TensorShape::new(3, 2).unwrap().for_each_coord(|c| {
            let m = phi(&q, 2, c).unwrap();
            assert!(m[0] < 4 && m[1] < 2);
            assert!(seen.insert(m));
        });
        assert_eq!(seen.len(), 8);
    }

    #[test]
    fn balanced_and_multiway() {
        assert_eq!(balanced_partition(4, 2).unwrap(), p(4, &[&[1, 2], &[3, 4]]));
        assert_eq!(balanced_partition(2, 1).unwrap(), p(2, &[&[1], &[2]]));
        assert_eq!(balanced_partition(5, 3).unwrap(), p(5, &[&[1, 2], &[3, 4, 5]]));
        assert!(balanced_partition(3, 3).is_err());
        assert!(balanced_partition(3, 0).is_err());
        assert_eq!(multiway_partition(5, 2).unwrap(), p(5, &[&[1, 2], &[3, 4], &[5]]));
        assert_eq!(multiway_partition(6, 2).unwrap(), p(6, &[&[1, 2], &[3, 4], &[5, 6]]));
        assert_eq!(multiway_partition(7, 3).unwrap(), p(7, &[&[1, 2, 3], &[4, 5, 6], &[7]]));
        assert!(multiway_partition(4, 2).is_err());
    }

    #[test]
    fn unfold_examples() {
        let s = TensorShape::new(3, 2).unwrap();
        let q = p(3, &[&[1, 2], &[3]]);
        let ones = OffsetTensor::from(SparseTensor::ones(s).unwrap());
        let v = unfold(&ones, &q).unwrap();
        assert_eq!(v.dims(), &[4, 2]);
        assert_eq!(v.nnz(), 8);
        assert!(v.iter().all(|(_, x)| x == 1.0));

        let single = SparseTensor::from_entries(s, vec![(vec![1, 0, 1], 1.0)]).unwrap();
        let v = unfold(&single.into(), &q).unwrap();
        assert_eq!(v.iter().collect::<Vec<_>>(), vec![(&[1u64, 1][..], 1.0)]);
    }

    #[test]
    fn unfold_carries_background() {
        let s = TensorShape::new(3, 3).unwrap();
        let t = OffsetTensor::new(SparseTensor::from_entries(s, vec![(vec![2, 1, 0], 2.0)]).unwrap(), -0.5).unwrap();
        let v = unfold(&t, &balanced_partition(3, 1).unwrap()).unwrap();
        assert_eq!(v.background(), -0.5);
        assert_eq!(v.get(&[2 + 3, 0]), 1.5);
        assert_eq!(v.get(&[0, 0]), -0.5);
        assert_eq!(v.frobenius_norm().unwrap(), crate::tensor::frobenius_norm(&t).unwrap());
    }

    #[test]
    fn chain_matches_direct_two_block_unfolding() {
        let s = TensorShape::new(5, 3).unwrap();
        let entries = (0..40u32).map(|i| (vec![i % 3, (i / 3) % 3, (i / 9) % 3, (i * 7) % 3, (i / 27) % 3], i as f64 + 1.0));
        let mut uniq = std::collections::BTreeMap::new();
        for (c, v) in entries {
            uniq.insert(c, v);
        }
        let t: OffsetTensor = SparseTensor::from_entries(s, uniq).unwrap().into();
        let pi2 = multiway_partition(5, 2).unwrap();
        let v2 = unfold(&t, &pi2).unwrap();
        assert_eq!(v2.dims(), &[9, 9, 3]);
        let chain = v2.unfold(&balanced_partition(3, 1).unwrap()).unwrap();
        let direct = unfold(&t, &p(5, &[&[1, 2, 3, 4], &[5]])).unwrap();
        assert_eq!(chain.dims(), direct.dims());
        assert_eq!(chain.iter().collect::<Vec<_>>(), direct.iter().collect::<Vec<_>>());
        assert_eq!(chain.groups(), direct.groups());
    }

    #[test]
    fn kron_matches_rank_one_entries() {
        let xs = VectorTuple::new(vec![vec![1.0, 2.0, 3.0], vec![0.5, -1.0, 4.0], vec![2.0, 0.0, 1.0]]).unwrap();
        let t: OffsetTensor = SparseTensor::from_dense(&crate::tensor::rank1(&xs).unwrap()).into();
        let v = unfold(&t, &p(3, &[&[1, 3], &[2]])).unwrap();
        let col = v.kron_for_mode(&xs, 0).unwrap();
        for (c, val) in v.iter() {
            assert_eq!(val, col[c[0] as usize] * xs.get(1)[c[1] as usize]);
        }
    }
}
