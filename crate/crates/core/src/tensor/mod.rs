//! Sparse order-k tensors over a uniform mode dimension.
//!
//! Coordinates are 0-based `u32` tuples internally; the text formats are
//! 1-based. Entries are kept sorted lexicographically with the last mode
//! varying fastest, which is also the order of dense buffers.

mod io;
pub(crate) mod ops;

pub use io::format_sig17;
pub use ops::{
    center, contract_all_but_one, frobenius_inner, frobenius_norm, hadamard, multilinear_form,
    rank1,
};

use std::cmp::Ordering;

use crate::error::{Error, Result};

/// Largest cell count `n^k` for which dense materialization is allowed.
pub const DENSE_GATE: u64 = 1_000_000;

/// Tolerance on Euclidean norms for [`VectorTuple::unit`].
pub const UNIT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TensorShape {
    order: usize,
    dim: u32,
}

impl TensorShape {
    pub fn new(order: usize, dim: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidShape(format!("order must be >= 2, got {order}")));
        }
        if dim == 0 || dim >= (1usize << 31) {
            return Err(Error::InvalidShape(format!("dimension must be in [1, 2^31), got {dim}")));
        }
        Ok(Self { order, dim: dim as u32 })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    /// `n^k`, saturating at `u128::MAX`.
    pub fn cells(&self) -> u128 {
        let mut c: u128 = 1;
        for _ in 0..self.order {
            c = c.saturating_mul(self.dim as u128);
        }
        c
    }

    pub fn dense_allowed(&self) -> bool {
        self.cells() <= DENSE_GATE as u128
    }

    /// Returns the cell count if the shape passes the dense gate.
    pub fn check_dense(&self) -> Result<usize> {
        let cells = self.cells();
        if cells > DENSE_GATE as u128 {
            return Err(Error::DenseGateExceeded { cells, gate: DENSE_GATE });
        }
        Ok(cells as usize)
    }

    pub fn contains(&self, coord: &[u32]) -> bool {
        coord.len() == self.order && coord.iter().all(|&c| c < self.dim)
    }

    /// Lexicographic rank of `coord` (last mode fastest).
    pub(crate) fn linear_index(&self, coord: &[u32]) -> u64 {
        coord.iter().fold(0u64, |acc, &c| acc * self.dim as u64 + c as u64)
    }

    /// Inverse of [`Self::linear_index`].
    pub(crate) fn coord_of(&self, mut idx: u64, out: &mut [u32]) {
        let n = self.dim as u64;
        for slot in out.iter_mut().rev() {
            *slot = (idx % n) as u32;
            idx /= n;
        }
    }

    /// Calls `f` for every coordinate in lexicographic order.
    pub(crate) fn for_each_coord(&self, mut f: impl FnMut(&[u32])) {
        let mut coord = vec![0u32; self.order];
        loop {
            f(&coord);
            let mut j = self.order;
            loop {
                if j == 0 {
                    return;
                }
                j -= 1;
                coord[j] += 1;
                if coord[j] < self.dim {
                    break;
                }
                coord[j] = 0;
            }
        }
    }

    pub(crate) fn check_same(&self, other: &TensorShape) -> Result<()> {
        if self != other {
            return Err(Error::ShapeMismatch {
                expected: format!("{self:?}"),
                found: format!("{other:?}"),
            });
        }
        Ok(())
    }
}

/// Dense row-major buffer, only constructible under the dense gate.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor {
    shape: TensorShape,
    data: Vec<f64>,
}

impl DenseTensor {
    pub fn new(shape: TensorShape, data: Vec<f64>) -> Result<Self> {
        let cells = shape.check_dense()?;
        if data.len() != cells {
            return Err(Error::DimensionMismatch(format!(
                "dense buffer has {} values, shape needs {cells}",
                data.len()
            )));
        }
        Ok(Self { shape, data })
    }

    pub fn filled(shape: TensorShape, value: f64) -> Result<Self> {
        let cells = shape.check_dense()?;
        Ok(Self { shape, data: vec![value; cells] })
    }

    pub fn shape(&self) -> TensorShape {
        self.shape
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, coord: &[u32]) -> f64 {
        self.data[self.shape.linear_index(coord) as usize]
    }
}

/// Coordinate-list tensor with unique, canonically sorted coordinates and no
/// explicit zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseTensor {
    shape: TensorShape,
    coords: Vec<u32>,
    values: Vec<f64>,
}

fn cmp_coords(a: &[u32], b: &[u32]) -> Ordering {
    a.cmp(b)
}

impl SparseTensor {
    pub fn zeros(shape: TensorShape) -> Self {
        Self { shape, coords: Vec::new(), values: Vec::new() }
    }

    /// Builds a tensor from arbitrary-order entries. Zero values are dropped;
    /// duplicate coordinates are an error.
    pub fn from_entries<I>(shape: TensorShape, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, f64)>,
    {
        let mut items: Vec<(Vec<u32>, f64)> = Vec::new();
        for (coord, value) in entries {
            if !shape.contains(&coord) {
                return Err(Error::CoordinateOutOfRange {
                    coord: coord.iter().map(|&c| c as u64).collect(),
                    dims: vec![shape.dim() as u64; shape.order()],
                });
            }
            if !value.is_finite() {
                return Err(Error::NonFinite(format!("entry {coord:?} = {value}")));
            }
            if value != 0.0 {
                items.push((coord, value));
            }
        }
        items.sort_by(|a, b| cmp_coords(&a.0, &b.0));
        for w in items.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::DuplicateCoordinate(w[0].0.clone()));
            }
        }
        let mut coords = Vec::with_capacity(items.len() * shape.order());
        let mut values = Vec::with_capacity(items.len());
        for (c, v) in items {
            coords.extend_from_slice(&c);
            values.push(v);
        }
        Ok(Self { shape, coords, values })
    }

    /// Wraps already-sorted, duplicate-free, zero-free parts.
    pub(crate) fn from_sorted_parts(shape: TensorShape, coords: Vec<u32>, values: Vec<f64>) -> Self {
        debug_assert_eq!(coords.len(), values.len() * shape.order());
        debug_assert!(values.iter().all(|v| *v != 0.0));
        let t = Self { shape, coords, values };
        debug_assert!((1..t.nnz()).all(|i| t.coord(i - 1) < t.coord(i)));
        t
    }

    /// The all-ones tensor `J`, materialized. Gated.
    pub fn ones(shape: TensorShape) -> Result<Self> {
        let cells = shape.check_dense()?;
        let mut coords = Vec::with_capacity(cells * shape.order());
        shape.for_each_coord(|c| coords.extend_from_slice(c));
        Ok(Self { shape, coords, values: vec![1.0; cells] })
    }

    pub fn from_dense(dense: &DenseTensor) -> Self {
        let shape = dense.shape();
        let mut coords = Vec::new();
        let mut values = Vec::new();
        let mut idx = 0usize;
        shape.for_each_coord(|c| {
            let v = dense.data[idx];
            idx += 1;
            if v != 0.0 {
                coords.extend_from_slice(c);
                values.push(v);
            }
        });
        Self { shape, coords, values }
    }

    pub fn shape(&self) -> TensorShape {
        self.shape
    }

    pub fn order(&self) -> usize {
        self.shape.order()
    }

    pub fn dim(&self) -> usize {
        self.shape.dim()
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn coord(&self, i: usize) -> &[u32] {
        let k = self.order();
        &self.coords[i * k..(i + 1) * k]
    }

    pub fn value(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = (&[u32], f64)> + '_ {
        self.coords.chunks_exact(self.order()).zip(self.values.iter().copied())
    }

    /// Position of `coord` in the entry list, if present.
    pub fn find(&self, coord: &[u32]) -> Option<usize> {
        let (mut lo, mut hi) = (0usize, self.nnz());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match cmp_coords(self.coord(mid), coord) {
                Ordering::Less => lo = mid + 1,
                Ordering::Greater => hi = mid,
                Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    pub fn get(&self, coord: &[u32]) -> f64 {
        self.find(coord).map_or(0.0, |i| self.values[i])
    }

    /// Entry range whose coordinates start with `prefix`.
    pub fn prefix_range(&self, prefix: &[u32]) -> std::ops::Range<usize> {
        let p = prefix.len();
        let lo = self.partition_point(|c| &c[..p] < prefix);
        let hi = self.partition_point(|c| &c[..p] <= prefix);
        lo..hi
    }

    fn partition_point(&self, pred: impl Fn(&[u32]) -> bool) -> usize {
        let (mut lo, mut hi) = (0usize, self.nnz());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if pred(self.coord(mid)) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Keeps the entries for which `keep` returns true.
    pub fn filter(&self, mut keep: impl FnMut(&[u32], f64) -> bool) -> SparseTensor {
        let mut coords = Vec::new();
        let mut values = Vec::new();
        for (c, v) in self.iter() {
            if keep(c, v) {
                coords.extend_from_slice(c);
                values.push(v);
            }
        }
        Self { shape: self.shape, coords, values }
    }

    pub fn to_dense(&self) -> Result<DenseTensor> {
        let mut d = DenseTensor::filled(self.shape, 0.0)?;
        for (c, v) in self.iter() {
            let idx = self.shape.linear_index(c) as usize;
            d.data[idx] = v;
        }
        Ok(d)
    }

    /// Whether every value is exactly `0` or `1`.
    pub fn is_binary(&self) -> bool {
        self.values.iter().all(|&v| v == 1.0)
    }
}

/// `sparse + background * J`.
#[derive(Debug, Clone, PartialEq)]
pub struct OffsetTensor {
    sparse: SparseTensor,
    background: f64,
}

impl OffsetTensor {
    pub fn new(sparse: SparseTensor, background: f64) -> Result<Self> {
        if !background.is_finite() {
            return Err(Error::NonFinite(format!("background {background}")));
        }
        Ok(Self { sparse, background })
    }

    pub fn zeros(shape: TensorShape) -> Self {
        Self { sparse: SparseTensor::zeros(shape), background: 0.0 }
    }

    /// `J` without materialization.
    pub fn all_ones(shape: TensorShape) -> Self {
        Self { sparse: SparseTensor::zeros(shape), background: 1.0 }
    }

    pub fn sparse(&self) -> &SparseTensor {
        &self.sparse
    }

    pub fn into_sparse(self) -> SparseTensor {
        self.sparse
    }

    pub fn background(&self) -> f64 {
        self.background
    }

    pub fn shape(&self) -> TensorShape {
        self.sparse.shape()
    }

    pub fn order(&self) -> usize {
        self.sparse.order()
    }

    pub fn dim(&self) -> usize {
        self.sparse.dim()
    }

    /// True when every represented value is zero.
    pub fn is_zero(&self) -> bool {
        self.background == 0.0 && self.sparse.is_empty()
    }

    pub fn value_at(&self, coord: &[u32]) -> f64 {
        self.sparse.get(coord) + self.background
    }

    pub fn to_dense(&self) -> Result<DenseTensor> {
        let mut d = DenseTensor::filled(self.shape(), self.background)?;
        for (c, v) in self.sparse.iter() {
            let idx = self.shape().linear_index(c) as usize;
            d.data[idx] += v;
        }
        Ok(d)
    }
}

impl From<SparseTensor> for OffsetTensor {
    fn from(sparse: SparseTensor) -> Self {
        Self { sparse, background: 0.0 }
    }
}

/// Entrywise Bernoulli means.
#[derive(Debug, Clone, PartialEq)]
pub enum ProbabilityModel {
    Homogeneous(f64),
    Dense(DenseTensor),
}

impl ProbabilityModel {
    pub fn homogeneous(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::OutOfRange(format!("probability {p} not in [0, 1]")));
        }
        Ok(Self::Homogeneous(p))
    }

    pub fn dense(probs: DenseTensor) -> Result<Self> {
        if let Some(bad) = probs.data().iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::OutOfRange(format!("probability {bad} not in [0, 1]")));
        }
        Ok(Self::Dense(probs))
    }

    pub fn p_max(&self) -> f64 {
        match self {
            Self::Homogeneous(p) => *p,
            Self::Dense(d) => d.data().iter().copied().fold(0.0, f64::max),
        }
    }

    pub fn prob_at(&self, coord: &[u32]) -> f64 {
        match self {
            Self::Homogeneous(p) => *p,
            Self::Dense(d) => d.get(coord),
        }
    }

    /// Checks that a dense model matches `shape`; homogeneous models fit any shape.
    pub(crate) fn check_shape(&self, shape: &TensorShape) -> Result<()> {
        match self {
            Self::Homogeneous(_) => Ok(()),
            Self::Dense(d) => d.shape().check_same(shape),
        }
    }
}

/// `k` real vectors of a common length `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorTuple {
    vectors: Vec<Vec<f64>>,
}

pub(crate) fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

impl VectorTuple {
    pub fn new(vectors: Vec<Vec<f64>>) -> Result<Self> {
        let Some(first) = vectors.first() else {
            return Err(Error::DimensionMismatch("empty vector tuple".into()));
        };
        let n = first.len();
        for (j, v) in vectors.iter().enumerate() {
            if v.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "vector {j} has length {}, expected {n}",
                    v.len()
                )));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite(format!("vector {j}")));
            }
        }
        Ok(Self { vectors })
    }

    /// Like [`Self::new`] but every vector must have unit Euclidean norm.
    pub fn unit(vectors: Vec<Vec<f64>>) -> Result<Self> {
        let t = Self::new(vectors)?;
        if !t.is_unit() {
            return Err(Error::OutOfRange("vectors are not unit-norm".into()));
        }
        Ok(t)
    }

    pub fn is_unit(&self) -> bool {
        self.vectors.iter().all(|v| (norm2(v) - 1.0).abs() <= UNIT_TOLERANCE)
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].len()
    }

    pub fn get(&self, j: usize) -> &[f64] {
        &self.vectors[j]
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn into_vectors(self) -> Vec<Vec<f64>> {
        self.vectors
    }

    pub fn norms(&self) -> Vec<f64> {
        self.vectors.iter().map(|v| norm2(v)).collect()
    }
}

/// Sum that does not depend on the order of `terms`: values are sorted
/// before accumulation, so any permutation of the same multiset produces the
/// same bits.
pub(crate) fn order_invariant_sum(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(f64::total_cmp);
    terms.iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(k: usize, n: usize) -> TensorShape {
        TensorShape::new(k, n).unwrap()
    }

    #[test]
    fn shape_rejects_degenerate() {
        assert!(TensorShape::new(1, 3).is_err());
        assert!(TensorShape::new(2, 0).is_err());
        assert_eq!(shape(3, 4).cells(), 64);
    }

    #[test]
    fn dense_gate_is_hard() {
        assert!(shape(3, 100).check_dense().is_ok());
        assert!(matches!(shape(3, 101).check_dense(), Err(Error::DenseGateExceeded { .. })));
        assert!(SparseTensor::ones(shape(2, 1001)).is_err());
    }

    #[test]
    fn entries_are_canonical() {
        let s = shape(2, 3);
        let a = SparseTensor::from_entries(s, vec![(vec![2, 0], 1.0), (vec![0, 1], 2.0)]).unwrap();
        let b = SparseTensor::from_entries(s, vec![(vec![0, 1], 2.0), (vec![2, 0], 1.0), (vec![1, 1], 0.0)])
            .unwrap();
        assert_eq!(a, b);
        assert_eq!(a.coord(0), &[0, 1]);
        assert_eq!(a.get(&[2, 0]), 1.0);
        assert_eq!(a.get(&[1, 1]), 0.0);
    }

    #[test]
    fn duplicates_and_range_rejected() {
        let s = shape(2, 3);
        assert!(matches!(
            SparseTensor::from_entries(s, vec![(vec![0, 1], 1.0), (vec![0, 1], 2.0)]),
            Err(Error::DuplicateCoordinate(_))
        ));
        assert!(matches!(
            SparseTensor::from_entries(s, vec![(vec![3, 0], 1.0)]),
            Err(Error::CoordinateOutOfRange { .. })
        ));
    }

    #[test]
    fn prefix_ranges_are_contiguous() {
        let t = SparseTensor::ones(shape(3, 3)).unwrap();
        assert_eq!(t.prefix_range(&[1]), 9..18);
        assert_eq!(t.prefix_range(&[2, 1]), 21..24);
        assert_eq!(t.prefix_range(&[]), 0..27);
    }

    #[test]
    fn linear_index_round_trip() {
        let s = shape(3, 5);
        let mut out = [0u32; 3];
        for idx in 0..125u64 {
            s.coord_of(idx, &mut out);
            assert_eq!(s.linear_index(&out), idx);
        }
    }

    #[test]
    fn offset_dense_is_entrywise_sum() {
        let s = shape(2, 2);
        let sp = SparseTensor::from_entries(s, vec![(vec![0, 1], 3.0)]).unwrap();
        let t = OffsetTensor::new(sp, -0.5).unwrap();
        assert_eq!(t.to_dense().unwrap().data(), &[-0.5, 2.5, -0.5, -0.5]);
    }

    #[test]
    fn unit_flag() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(VectorTuple::unit(vec![vec![h, h], vec![1.0, 0.0]]).is_ok());
        assert!(VectorTuple::unit(vec![vec![1.0, 1.0]]).is_err());
        assert!(VectorTuple::new(vec![vec![1.0], vec![1.0, 0.0]]).is_err());
        assert!(VectorTuple::new(vec![vec![f64::NAN]]).is_err());
    }

    #[test]
    fn probability_model_validates() {
        assert!(ProbabilityModel::homogeneous(1.5).is_err());
        let d = DenseTensor::new(shape(2, 2), vec![0.1, 0.9, 0.3, 0.0]).unwrap();
        let m = ProbabilityModel::dense(d).unwrap();
        assert_eq!(m.p_max(), 0.9);
        assert_eq!(m.prob_at(&[1, 0]), 0.3);
    }
}
