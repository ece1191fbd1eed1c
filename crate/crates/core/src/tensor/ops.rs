use super::{order_invariant_sum, DenseTensor, OffsetTensor, ProbabilityModel, SparseTensor, VectorTuple};
use crate::error::{Error, Result};

/// `<T, A>`, the sum of entrywise products.
///
/// Two purely sparse operands are merged along their sorted entry lists. A
/// nonzero background on either side needs the dense gate.
pub fn frobenius_inner(t: &OffsetTensor, a: &OffsetTensor) -> Result<f64> {
    t.shape().check_same(&a.shape())?;
    if t.background() == 0.0 && a.background() == 0.0 {
        let (x, y) = (t.sparse(), a.sparse());
        let mut terms = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < x.nnz() && j < y.nnz() {
            match x.coord(i).cmp(y.coord(j)) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    terms.push(x.value(i) * y.value(j));
                    i += 1;
                    j += 1;
                }
            }
        }
        return Ok(order_invariant_sum(terms));
    }
    let dt = t.to_dense()?;
    let da = a.to_dense()?;
    Ok(order_invariant_sum(dt.data().iter().zip(da.data()).map(|(x, y)| x * y).collect()))
}

/// `sqrt(<T, T>)`.
pub fn frobenius_norm(t: &OffsetTensor) -> Result<f64> {
    if t.background() == 0.0 {
        let sq = t.sparse().values().iter().map(|v| v * v).collect();
        return Ok(order_invariant_sum(sq).sqrt());
    }
    let d = t.to_dense()?;
    Ok(order_invariant_sum(d.data().iter().map(|v| v * v).collect()).sqrt())
}

fn check_vectors(t: &OffsetTensor, xs: &[&[f64]]) -> Result<()> {
    for (j, x) in xs.iter().enumerate() {
        if x.len() != t.dim() {
            return Err(Error::DimensionMismatch(format!(
                "vector {j} has length {}, tensor dimension is {}",
                x.len(),
                t.dim()
            )));
        }
    }
    Ok(())
}

/// `T(x_1, ..., x_k) = <T, x_1 ⊗ ... ⊗ x_k>` in `O(nnz·k + n·k)`.
pub fn multilinear_form(t: &OffsetTensor, xs: &VectorTuple) -> Result<f64> {
    if xs.len() != t.order() {
        return Err(Error::DimensionMismatch(format!(
            "{} vectors supplied for an order-{} tensor",
            xs.len(),
            t.order()
        )));
    }
    let refs: Vec<&[f64]> = xs.vectors().iter().map(Vec::as_slice).collect();
    check_vectors(t, &refs)?;
    Ok(form_unchecked(t, &refs))
}

pub(crate) fn form_unchecked(t: &OffsetTensor, xs: &[&[f64]]) -> f64 {
    let mut acc = 0.0;
    for (c, v) in t.sparse().iter() {
        let mut prod = v;
        for (j, &i) in c.iter().enumerate() {
            prod *= xs[j][i as usize];
        }
        acc += prod;
    }
    if t.background() != 0.0 {
        let sums: f64 = xs.iter().map(|x| x.iter().sum::<f64>()).product();
        acc += t.background() * sums;
    }
    acc
}

/// Contracts every mode except `free_mode`; `others` lists the remaining
/// `k - 1` vectors in mode order. Component `i` equals the form with `e_i`
/// placed at `free_mode`.
pub fn contract_all_but_one(t: &OffsetTensor, others: &[&[f64]], free_mode: usize) -> Result<Vec<f64>> {
    let k = t.order();
    if free_mode >= k {
        return Err(Error::DimensionMismatch(format!("free mode {free_mode} >= order {k}")));
    }
    if others.len() + 1 != k {
        return Err(Error::DimensionMismatch(format!(
            "{} vectors supplied, order-{k} contraction needs {}",
            others.len(),
            k - 1
        )));
    }
    check_vectors(t, others)?;
    let empty: &[f64] = &[];
    let mut full: Vec<&[f64]> = Vec::with_capacity(k);
    full.extend_from_slice(&others[..free_mode]);
    full.push(empty);
    full.extend_from_slice(&others[free_mode..]);
    let mut out = vec![0.0; t.dim()];
    contract_into(t, &full, free_mode, &mut out);
    Ok(out)
}

/// `xs` has `k` slots; the slot at `free_mode` is ignored.
pub(crate) fn contract_into(t: &OffsetTensor, xs: &[&[f64]], free_mode: usize, out: &mut [f64]) {
    out.iter_mut().for_each(|o| *o = 0.0);
    for (c, v) in t.sparse().iter() {
        let mut prod = v;
        for (j, &i) in c.iter().enumerate() {
            if j != free_mode {
                prod *= xs[j][i as usize];
            }
        }
        out[c[free_mode] as usize] += prod;
    }
    if t.background() != 0.0 {
        let mut sums = t.background();
        for (j, x) in xs.iter().enumerate() {
            if j != free_mode {
                sums *= x.iter().sum::<f64>();
            }
        }
        out.iter_mut().for_each(|o| *o += sums);
    }
}

/// `(A ∘ T)` restricted to the support of `T`. Weights come from the offset
/// tensor `a`, so `OffsetTensor::all_ones` acts as the identity.
pub fn hadamard(a: &OffsetTensor, t: &SparseTensor) -> Result<SparseTensor> {
    t.shape().check_same(&a.shape())?;
    let w = a.sparse();
    let mut coords = Vec::new();
    let mut values = Vec::new();
    let mut j = 0;
    for (c, v) in t.iter() {
        while j < w.nnz() && w.coord(j) < c {
            j += 1;
        }
        let mut weight = a.background();
        if j < w.nnz() && w.coord(j) == c {
            weight += w.value(j);
        }
        let prod = weight * v;
        if prod != 0.0 {
            coords.extend_from_slice(c);
            values.push(prod);
        }
    }
    Ok(SparseTensor::from_sorted_parts(t.shape(), coords, values))
}

/// `T - E[T]`. A homogeneous model stays sparse with background `-p`
/// (folded into the entries when `T` has full support); a dense model is
/// materialized under the gate.
pub fn center(t: &SparseTensor, model: &ProbabilityModel) -> Result<OffsetTensor> {
    model.check_shape(&t.shape())?;
    match model {
        ProbabilityModel::Homogeneous(p) if t.nnz() as u128 == t.shape().cells() => {
            let mut coords = Vec::with_capacity(t.nnz() * t.order());
            let mut values = Vec::with_capacity(t.nnz());
            for (c, v) in t.iter() {
                if v - p != 0.0 {
                    coords.extend_from_slice(c);
                    values.push(v - p);
                }
            }
            OffsetTensor::new(SparseTensor::from_sorted_parts(t.shape(), coords, values), 0.0)
        }
        ProbabilityModel::Homogeneous(p) => OffsetTensor::new(t.clone(), -p),
        ProbabilityModel::Dense(probs) => {
            let mut d = t.to_dense()?;
            for (x, p) in d.data.iter_mut().zip(probs.data()) {
                *x -= p;
            }
            Ok(SparseTensor::from_dense(&d).into())
        }
    }
}

/// `x_1 ⊗ ... ⊗ x_k` as a dense tensor. Gated.
pub fn rank1(xs: &VectorTuple) -> Result<DenseTensor> {
    let shape = super::TensorShape::new(xs.len(), xs.dim())?;
    let cells = shape.check_dense()?;
    let mut data = Vec::with_capacity(cells);
    shape.for_each_coord(|c| {
        let mut prod = 1.0;
        for (j, &i) in c.iter().enumerate() {
            prod *= xs.get(j)[i as usize];
        }
        data.push(prod);
    });
    DenseTensor::new(shape, data)
}
