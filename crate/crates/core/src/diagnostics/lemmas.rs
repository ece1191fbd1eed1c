use serde::Serialize;

use super::{check_delta, LemmaConstants};
use crate::error::{Error, Result};
use crate::hypergraph::{for_each_family, EdgeCounter, FamilySpec};
use crate::regularization::degree_map;
use crate::rng::SeedSpec;
use crate::tensor::{SparseTensor, VectorTuple};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DegreeCheck {
    pub max_degree: f64,
    /// `c1·n·p`.
    pub bound: f64,
    pub within: bool,
}

/// Largest `(k-1)`-prefix degree against `c1·n·p`.
pub fn bounded_degree_check(t: &SparseTensor, p: f64, c1: f64) -> Result<DegreeCheck> {
    let max_degree = degree_map(t, 1)?.max();
    let bound = c1 * t.dim() as f64 * p;
    Ok(DegreeCheck { max_degree, bound, within: max_degree <= bound })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscrepancyReport {
    pub families: usize,
    /// Tuples passing `e/μ̄ ≤ e·c2` (Euler's `e`).
    pub case1: usize,
    /// Tuples failing case 1 but passing `e·ln(e/μ̄) ≤ c3·|I_k|·ln(n/|I_k|)`.
    pub case2: usize,
    pub violations: usize,
    /// Smallest `c2` for which case 1 alone covers every tuple.
    pub fitted_c2: f64,
    /// Smallest `c3` covering, through case 2, the tuples case 1 misses at
    /// the configured `c2`.
    pub fitted_c3: f64,
    pub exhaustive: bool,
}

impl DiscrepancyReport {
    pub fn passes(&self) -> bool {
        self.violations == 0
    }
}

/// Both cases of the bounded-discrepancy lemma over a family of index-set
/// tuples. Each set stays in its own mode; `|I_k|` is the largest set size.
/// `e = 0` satisfies case 2 by the `0·log` convention.
pub fn discrepancy_check(
    t: &SparseTensor,
    p: f64,
    constants: &LemmaConstants,
    spec: &FamilySpec,
    seed: SeedSpec,
) -> Result<DiscrepancyReport> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::OutOfRange(format!("p = {p} not in (0, 1]")));
    }
    let counter = EdgeCounter::new(t)?;
    let (k, n) = (t.order(), t.dim() as f64);
    let euler = std::f64::consts::E;
    let mut r = DiscrepancyReport {
        families: 0,
        case1: 0,
        case2: 0,
        violations: 0,
        fitted_c2: 0.0,
        fitted_c3: 0.0,
        exhaustive: false,
    };
    r.exhaustive = for_each_family(k, t.dim(), spec, seed, |sets| {
        r.families += 1;
        let e = counter.count(sets)? as f64;
        if e == 0.0 {
            r.case1 += 1;
            return Ok(());
        }
        let mu = p * sets.iter().map(|s| s.len() as f64).product::<f64>();
        let largest = sets.iter().map(Vec::len).max().expect("k >= 2") as f64;
        let lambda = e / mu;
        r.fitted_c2 = r.fitted_c2.max(lambda / euler);
        if lambda <= euler * constants.c2 {
            r.case1 += 1;
            return Ok(());
        }
        let lhs = e * lambda.ln();
        let scale = largest * (n / largest).ln();
        let need = if lhs <= 0.0 {
            0.0
        } else if scale > 0.0 {
            lhs / scale
        } else {
            f64::INFINITY
        };
        r.fitted_c3 = r.fitted_c3.max(need);
        if lhs <= constants.c3 * scale {
            r.case2 += 1;
        } else {
            r.violations += 1;
        }
        Ok(())
    })?;
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DyadicCell {
    /// 1-based levels `(s_1, ..., s_k)`.
    pub levels: Vec<usize>,
    pub count: u64,
    /// `p·∏|D_j^{s_j}|`.
    pub mu_bar: f64,
    pub lambda: f64,
    /// `λ·n^{k/2-1}·√(np)·2^{-Σs}`.
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DyadicProfile {
    pub delta: f64,
    /// Number of levels `S = ⌈log2(√n/δ)⌉`.
    pub levels: usize,
    /// `classes[j][s-1]`: indices `i` with `y_{j,i}` in level `s`.
    pub classes: Vec<Vec<Vec<u32>>>,
    /// `alpha[j][s-1] = |D_j^s|·2^{2s}/n`.
    pub alpha: Vec<Vec<f64>>,
    /// Every level tuple whose classes are all nonempty.
    pub cells: Vec<DyadicCell>,
}

impl DyadicProfile {
    pub fn alpha_sums(&self) -> Vec<f64> {
        self.alpha.iter().map(|a| a.iter().sum()).collect()
    }
}

/// Level of a positive entry `y ≥ δ/√n`: the `s` with
/// `2^{s-1}δ/√n ≤ y < 2^sδ/√n`, the top level closed on the right.
fn level_of(y: f64, unit: f64, levels: usize) -> Option<usize> {
    if !(y >= unit) {
        return None;
    }
    let mut s = 1;
    let mut upper = 2.0 * unit;
    while s < levels && y >= upper {
        s += 1;
        upper *= 2.0;
    }
    Some(s)
}

/// Dyadic classes of the positive entries of `ys` plus the per-cell edge
/// statistics of the 0/1 tensor `t`.
pub fn dyadic_profile(ys: &VectorTuple, delta: f64, t: &SparseTensor, p: f64) -> Result<DyadicProfile> {
    check_delta(delta)?;
    if ys.len() != t.order() || ys.dim() != t.dim() {
        return Err(Error::DimensionMismatch("vector tuple does not match the tensor".into()));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::OutOfRange(format!("p = {p} not in (0, 1]")));
    }
    let (k, n) = (t.order(), t.dim());
    let nf = n as f64;
    let unit = delta / nf.sqrt();
    let levels = ((nf.sqrt() / delta).log2().ceil() as usize).max(1);
    let mut classes = vec![vec![Vec::new(); levels]; k];
    for (j, cls) in classes.iter_mut().enumerate() {
        for (i, &y) in ys.get(j).iter().enumerate() {
            if let Some(s) = level_of(y, unit, levels) {
                cls[s - 1].push(i as u32);
            }
        }
    }
    let alpha = classes
        .iter()
        .map(|cls| {
            cls.iter()
                .enumerate()
                .map(|(s, c)| c.len() as f64 * 4f64.powi(s as i32 + 1) / nf)
                .collect()
        })
        .collect();
    let counter = EdgeCounter::new(t)?;
    let scale = nf.powf(k as f64 / 2.0 - 1.0) * (nf * p).sqrt();
    let mut cells = Vec::new();
    let mut lv = vec![1usize; k];
    'outer: loop {
        let sets: Vec<Vec<u32>> = (0..k).map(|j| classes[j][lv[j] - 1].clone()).collect();
        if sets.iter().all(|s| !s.is_empty()) {
            let count = counter.count(&sets)?;
            let mu_bar = p * sets.iter().map(|s| s.len() as f64).product::<f64>();
            let lambda = count as f64 / mu_bar;
            let sum: i32 = lv.iter().map(|&s| s as i32).sum();
            cells.push(DyadicCell { levels: lv.clone(), count, mu_bar, lambda, sigma: lambda * scale * 2f64.powi(-sum) });
        }
        let mut j = k;
        loop {
            if j == 0 {
                break 'outer;
            }
            j -= 1;
            if lv[j] < levels {
                lv[j] += 1;
                break;
            }
            lv[j] = 1;
        }
    }
    Ok(DyadicProfile { delta, levels, classes, alpha, cells })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::TensorShape;

    #[test]
    fn degree_check_extremes() {
        let s = TensorShape::new(3, 5).unwrap();
        let ones = SparseTensor::ones(s).unwrap();
        let r = bounded_degree_check(&ones, 1.0, 1.0).unwrap();
        assert_eq!(r.max_degree, 5.0);
        assert!(r.within);
        let z = bounded_degree_check(&SparseTensor::zeros(s), 0.1, 3.0).unwrap();
        assert_eq!(z.max_degree, 0.0);
        assert!(z.within);
    }

    #[test]
    fn discrepancy_extremes() {
        let s = TensorShape::new(3, 6).unwrap();
        let spec = FamilySpec { samples: 300, allow_exhaustive: true };
        let lc = LemmaConstants::default();
        let full = discrepancy_check(&SparseTensor::ones(s).unwrap(), 1.0, &lc, &spec, SeedSpec::new(1, 0)).unwrap();
        assert_eq!(full.case1, full.families);
        assert!((full.fitted_c2 - 1.0 / std::f64::consts::E).abs() < 1e-12);
        let empty = discrepancy_check(&SparseTensor::zeros(s), 0.3, &lc, &spec, SeedSpec::new(1, 0)).unwrap();
        assert_eq!(empty.violations, 0);
        assert_eq!(empty.fitted_c2, 0.0);
    }

    #[test]
    fn uniform_vector_single_class() {
        let n = 16;
        let s = TensorShape::new(2, n).unwrap();
        let u = vec![1.0 / (n as f64).sqrt(); n];
        let ys = VectorTuple::unit(vec![u.clone(), u]).unwrap();
        let t = SparseTensor::ones(s).unwrap();
        let prof = dyadic_profile(&ys, 0.5, &t, 1.0).unwrap();
        assert_eq!(prof.levels, 3);
        for cls in &prof.classes {
            assert_eq!(cls[1].len(), n);
            assert!(cls[0].is_empty() && cls[2].is_empty());
        }
        assert!(prof.alpha_sums().iter().all(|&a| a <= 16.0 + 1e-12));
        assert_eq!(prof.cells.len(), 1);
        assert!((prof.cells[0].lambda - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_vector_has_empty_classes() {
        let s = TensorShape::new(2, 4).unwrap();
        let ys = VectorTuple::new(vec![vec![0.0; 4], vec![0.0; 4]]).unwrap();
        let prof = dyadic_profile(&ys, 0.5, &SparseTensor::zeros(s), 0.5).unwrap();
        assert!(prof.classes.iter().flatten().all(Vec::is_empty));
        assert!(prof.cells.is_empty());
    }
}
