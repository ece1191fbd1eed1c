//! Spectral-norm sandwiches.
//!
//! The tensor spectral norm is intractable, so estimates come as a pair:
//! lower bounds are form values actually achieved at unit vectors (power
//! method on the tensor, or a matrix slice), upper bounds are operator norms
//! of matrix unfoldings.

mod matrix;

pub use matrix::{matrix_op_norm, matrix_op_norm_seeded, MatrixNorm, SparseMatrix};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{Domain, SeedSpec};
use crate::tensor::ops::{contract_into, form_unchecked};
use crate::tensor::{multilinear_form, norm2, OffsetTensor, SparseTensor, TensorShape, VectorTuple, DENSE_GATE};
use crate::unfolding::{balanced_partition, multiway_partition, unfold, Partition};

/// Slack allowed between a lower and an upper bound from rounding.
pub const SANDWICH_SLACK: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PowerIterConfig {
    pub matrix_tolerance: f64,
    pub tensor_tolerance: f64,
    pub max_iterations: usize,
    pub restarts: usize,
    /// Random slices tried by [`slice_lower`] inside [`spectral_sandwich`].
    pub slices: usize,
    pub seed: SeedSpec,
}

impl Default for PowerIterConfig {
    fn default() -> Self {
        Self {
            matrix_tolerance: 1e-10,
            tensor_tolerance: 1e-8,
            max_iterations: 500,
            restarts: 16,
            slices: 4,
            seed: SeedSpec::default(),
        }
    }
}

impl PowerIterConfig {
    pub fn with_seed(seed: SeedSpec) -> Self {
        Self { seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.matrix_tolerance > 0.0) || !(self.tensor_tolerance > 0.0) {
            return Err(Error::OutOfRange("tolerances must be positive".into()));
        }
        if self.restarts == 0 {
            return Err(Error::OutOfRange("restarts must be >= 1".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::OutOfRange("max_iterations must be >= 1".into()));
        }
        Ok(())
    }

    fn child(&self, salt: u64) -> Self {
        Self { seed: self.seed.child(salt), ..*self }
    }
}

/// An achieved rank-one form value.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerBound {
    /// `|T(witness)|`, recomputed from the witness.
    pub value: f64,
    pub witness: VectorTuple,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralEstimate {
    pub lower: f64,
    pub upper: f64,
    /// `upper / (1 - 10·tol)`; for reports only.
    pub upper_cap: f64,
    pub lower_witness: VectorTuple,
    pub upper_partition: Partition,
    pub iterations_used: usize,
    pub hopm_lower: f64,
    pub slice_lower: Option<f64>,
    /// Two-step unfolding (multiway, then balanced over blocks), for `m < k/2`.
    pub chain_upper: Option<f64>,
    pub chain_partition: Option<Partition>,
    pub converged: bool,
}

fn basis_tuple(k: usize, n: usize, fixed: &[u32]) -> Vec<Vec<f64>> {
    (0..k)
        .map(|j| {
            let mut e = vec![0.0; n];
            e[fixed.get(j).copied().unwrap_or(0) as usize] = 1.0;
            e
        })
        .collect()
}

fn random_unit(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let nv = norm2(&v);
        if nv > 1e-12 {
            return v.into_iter().map(|x| x / nv).collect();
        }
    }
}

struct HopmRun {
    xs: Vec<Vec<f64>>,
    value: f64,
    iterations: usize,
    converged: bool,
}

fn hopm_run(t: &OffsetTensor, mut xs: Vec<Vec<f64>>, tol: f64, max_iter: usize) -> HopmRun {
    let k = t.order();
    for x in xs.iter_mut() {
        let nx = norm2(x);
        if nx > 0.0 {
            x.iter_mut().for_each(|v| *v /= nx);
        }
    }
    let mut buf = vec![0.0; t.dim()];
    let mut prev = f64::NAN;
    let mut stable = 0;
    let mut value = 0.0;
    let mut iterations = 0;
    let mut converged = false;
    'outer: for _ in 0..max_iter {
        iterations += 1;
        for j in 0..k {
            {
                let refs: Vec<&[f64]> = xs.iter().map(Vec::as_slice).collect();
                contract_into(t, &refs, j, &mut buf);
            }
            let nb = norm2(&buf);
            if nb == 0.0 {
                value = 0.0;
                converged = true;
                break 'outer;
            }
            for (x, b) in xs[j].iter_mut().zip(&buf) {
                *x = b / nb;
            }
            value = nb;
        }
        let rel = (value - prev).abs() / value;
        if rel < tol {
            stable += 1;
            if stable >= 2 {
                converged = true;
                break;
            }
        } else {
            stable = 0;
        }
        prev = value;
    }
    let refs: Vec<&[f64]> = xs.iter().map(Vec::as_slice).collect();
    let achieved = form_unchecked(t, &refs).abs();
    HopmRun { value: achieved.max(if value == 0.0 { 0.0 } else { achieved }), xs, iterations, converged }
}

fn best_of_runs(t: &OffsetTensor, starts: Vec<Vec<Vec<f64>>>, tol: f64, max_iter: usize) -> LowerBound {
    let mut best: Option<HopmRun> = None;
    let mut total = 0;
    for s in starts {
        let r = hopm_run(t, s, tol, max_iter);
        total += r.iterations;
        if best.as_ref().is_none_or(|b| r.value > b.value) {
            best = Some(r);
        }
    }
    let best = best.expect("at least one start");
    let witness = VectorTuple::new(best.xs).expect("finite unit vectors");
    let value = multilinear_form(t, &witness).expect("shapes agree").abs();
    LowerBound { value, witness, iterations: total, converged: best.converged }
}

/// Splits a vector indexed column-major over `r` modes of size `n` into `r`
/// factors via a best rank-one fit of the reshaped tensor.
fn fold_back(vec: &[f64], r: usize, n: usize, config: &PowerIterConfig) -> Option<Vec<Vec<f64>>> {
    if r == 1 {
        return Some(vec![vec.to_vec()]);
    }
    if vec.len() as u64 > DENSE_GATE {
        return None;
    }
    let shape = TensorShape::new(r, n).ok()?;
    let mut entries = Vec::new();
    for (idx, &v) in vec.iter().enumerate() {
        if v != 0.0 {
            let mut rest = idx;
            let digits: Vec<u32> = (0..r)
                .map(|_| {
                    let d = (rest % n) as u32;
                    rest /= n;
                    d
                })
                .collect();
            entries.push((digits, v));
        }
    }
    let small: OffsetTensor = SparseTensor::from_entries(shape, entries).ok()?.into();
    let mut rng = config.seed.rng(Domain::HopmRestart, u64::MAX);
    let starts = (0..config.restarts.min(4)).map(|_| (0..r).map(|_| random_unit(&mut rng, n)).collect()).collect();
    Some(best_of_runs(&small, starts, config.tensor_tolerance, config.max_iterations).witness.into_vectors())
}

/// Factors for all `k` modes from a singular pair of the unfolding `partition`.
fn seed_from_unfolding(partition: &Partition, left: &[f64], right: &[f64], n: usize, config: &PowerIterConfig) -> Option<Vec<Vec<f64>>> {
    let mut out = vec![Vec::new(); partition.k()];
    for (block, vec) in partition.blocks().iter().zip([left, right]) {
        let factors = fold_back(vec, block.len(), n, config)?;
        for (&mode, f) in block.iter().zip(factors) {
            out[mode] = f;
        }
    }
    Some(out)
}

fn hopm_with_seed(t: &OffsetTensor, config: &PowerIterConfig, seeded: Option<Vec<Vec<f64>>>) -> LowerBound {
    let (k, n) = (t.order(), t.dim());
    let mut starts: Vec<Vec<Vec<f64>>> = seeded.into_iter().collect();
    for restart in 0..config.restarts {
        let mut rng = config.seed.rng(Domain::HopmRestart, restart as u64);
        starts.push((0..k).map(|_| random_unit(&mut rng, n)).collect());
    }
    best_of_runs(t, starts, config.tensor_tolerance, config.max_iterations)
}

fn zero_lower(t: &OffsetTensor) -> LowerBound {
    LowerBound {
        value: 0.0,
        witness: VectorTuple::new(basis_tuple(t.order(), t.dim(), &[])).expect("basis vectors"),
        iterations: 0,
        converged: true,
    }
}

/// Higher-order power method: alternating rank-one updates from random unit
/// starts plus one start folded back from the balanced unfolding's top
/// singular pair. The returned value is achieved, hence `<= ‖T‖`.
pub fn hopm_lower(t: &OffsetTensor, config: &PowerIterConfig) -> Result<LowerBound> {
    config.validate()?;
    if t.is_zero() {
        return Ok(zero_lower(t));
    }
    let k = t.order();
    let partition = balanced_partition(k, k / 2)?;
    let view = unfold(t, &partition)?;
    let seeded = view.to_matrix().ok().and_then(|m| {
        let mn = matrix_op_norm(&m, &config.child(1)).ok()?;
        seed_from_unfolding(&partition, &mn.left, &mn.right, t.dim(), config)
    });
    Ok(hopm_with_seed(t, config, seeded))
}

/// Slice at `fixed` (indices of modes 3..k) as an `n × n` matrix.
fn slice_matrix(t: &OffsetTensor, fixed: &[u32]) -> Result<SparseMatrix> {
    let n = t.dim();
    let triplets = t
        .sparse()
        .iter()
        .filter(|(c, _)| &c[2..] == fixed)
        .map(|(c, v)| (c[0] as usize, c[1] as usize, v));
    SparseMatrix::from_sorted_triplets(n, n, triplets, t.background())
}

/// Best slice: `max σ_max(T(·, ·, e_{l_3}, ..., e_{l_k}))` over the all-first
/// slice and `num_slices - 1` random ones. Needs `k >= 3`.
pub fn slice_lower(t: &OffsetTensor, num_slices: usize, config: &PowerIterConfig) -> Result<LowerBound> {
    config.validate()?;
    let k = t.order();
    if k < 3 {
        return Err(Error::OutOfRange(format!("slice bound needs order >= 3, got {k}")));
    }
    if num_slices == 0 {
        return Err(Error::OutOfRange("num_slices must be >= 1".into()));
    }
    if t.is_zero() {
        return Ok(zero_lower(t));
    }
    let n = t.dim();
    let mut rng = config.seed.rng(Domain::Slices, 0);
    let mut best: Option<LowerBound> = None;
    let mut total = 0;
    for s in 0..num_slices {
        let fixed: Vec<u32> = if s == 0 { vec![0; k - 2] } else { (0..k - 2).map(|_| rng.gen_range(0..n as u32)).collect() };
        let m = slice_matrix(t, &fixed)?;
        let mn = matrix_op_norm(&m, &config.child(100 + s as u64))?;
        total += mn.iterations;
        let mut xs = vec![mn.left, mn.right];
        xs.extend(basis_tuple(k - 2, n, &fixed));
        let witness = VectorTuple::new(xs)?;
        let value = multilinear_form(t, &witness)?.abs();
        if best.as_ref().is_none_or(|b| value > b.value) {
            best = Some(LowerBound { value, witness, iterations: 0, converged: mn.converged });
        }
    }
    let mut best = best.expect("num_slices >= 1");
    best.iterations = total;
    Ok(best)
}

/// Power run on the view's matrix started from the witness laid out as a
/// column vector. That start alone reaches `|T(witness)|`, so the result is
/// never below the lower bound. `restarts` adds random starts as well.
fn unfolding_upper(
    view: &crate::unfolding::UnfoldedView,
    witness: &VectorTuple,
    config: &PowerIterConfig,
    restarts: bool,
) -> Result<MatrixNorm> {
    let m = view.to_matrix()?;
    let start = view.kron_for_mode(witness, 1)?;
    if restarts {
        matrix_op_norm_seeded(&m, config, &[start])
    } else {
        matrix::power_from(&m, config, &start)
    }
}

/// `lower <= ‖T‖ <= upper`, with the upper bound from the balanced
/// unfolding whose column block has `m` modes.
pub fn spectral_sandwich(t: &OffsetTensor, m: usize, config: &PowerIterConfig) -> Result<SpectralEstimate> {
    config.validate()?;
    let k = t.order();
    let partition = balanced_partition(k, m)?;
    if t.is_zero() {
        let z = zero_lower(t);
        return Ok(SpectralEstimate {
            lower: 0.0,
            upper: 0.0,
            upper_cap: 0.0,
            lower_witness: z.witness,
            upper_partition: partition,
            iterations_used: 0,
            hopm_lower: 0.0,
            slice_lower: None,
            chain_upper: None,
            chain_partition: None,
            converged: true,
        });
    }
    let view = unfold(t, &partition)?;
    let unfolded = matrix_op_norm(&view.to_matrix()?, &config.child(1))?;
    let mut iterations = unfolded.iterations;
    let seeded = seed_from_unfolding(&partition, &unfolded.left, &unfolded.right, t.dim(), config);
    let hopm = hopm_with_seed(t, config, seeded);
    iterations += hopm.iterations;
    let mut converged = unfolded.converged && hopm.converged;

    let slice = if k >= 3 { Some(slice_lower(t, config.slices.max(1), &config.child(2))?) } else { None };
    let (lower, lower_witness) = match &slice {
        Some(s) if s.value > hopm.value => (s.value, s.witness.clone()),
        _ => (hopm.value, hopm.witness.clone()),
    };
    if let Some(s) = &slice {
        iterations += s.iterations;
    }

    let seeded_upper = unfolding_upper(&view, &lower_witness, &config.child(3), false)?;
    iterations += seeded_upper.iterations;
    converged &= seeded_upper.converged || unfolded.converged;
    let upper = unfolded.value.max(seeded_upper.value);

    let (chain_upper, chain_partition) = if 2 * m < k {
        let pi2 = multiway_partition(k, m)?;
        let l = pi2.len();
        let v2 = unfold(t, &pi2)?.unfold(&balanced_partition(l, (l / 2).max(1))?)?;
        let chain = unfolding_upper(&v2, &lower_witness, &config.child(4), true)?;
        iterations += chain.iterations;
        debug_assert!(chain.value + SANDWICH_SLACK >= lower * (1.0 - 1e-12));
        (Some(chain.value), Some(pi2))
    } else {
        (None, None)
    };
    Ok(SpectralEstimate {
        lower,
        upper,
        upper_cap: upper / (1.0 - 10.0 * config.matrix_tolerance),
        lower_witness,
        upper_partition: partition,
        iterations_used: iterations,
        hopm_lower: hopm.value,
        slice_lower: slice.map(|s| s.value),
        chain_upper,
        chain_partition,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::bernoulli_sample;
    use crate::tensor::{center, frobenius_norm, rank1, ProbabilityModel};

    fn cfg(seed: u64) -> PowerIterConfig {
        PowerIterConfig::with_seed(SeedSpec::new(seed, 0))
    }

    fn shape(k: usize, n: usize) -> TensorShape {
        TensorShape::new(k, n).unwrap()
    }

    #[test]
    fn hopm_on_rank_one() {
        let xs = VectorTuple::new(vec![vec![2.0, 0.0, 0.0], vec![0.0, 3.0, 0.0], vec![0.6, 0.0, 0.8]]).unwrap();
        let t: OffsetTensor = SparseTensor::from_dense(&rank1(&xs).unwrap()).into();
        let r = hopm_lower(&t, &cfg(1)).unwrap();
        assert!((r.value - 6.0).abs() < 1e-6, "{}", r.value);
        assert!(r.witness.is_unit());
    }

    #[test]
    fn hopm_on_ones() {
        let t = OffsetTensor::all_ones(shape(3, 3));
        let r = hopm_lower(&t, &cfg(2)).unwrap();
        assert!((r.value - 27f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn hopm_witness_reproduces_value() {
        let s = shape(3, 10);
        let t = bernoulli_sample(s, &ProbabilityModel::homogeneous(0.3).unwrap(), SeedSpec::new(4, 1)).unwrap();
        let w = center(&t, &ProbabilityModel::homogeneous(0.3).unwrap()).unwrap();
        let r = hopm_lower(&w, &cfg(3)).unwrap();
        let again = multilinear_form(&w, &r.witness).unwrap().abs();
        assert!((again - r.value).abs() <= 1e-8 * r.value);
        assert!(r.value <= frobenius_norm(&w).unwrap());
    }

    // Grid over the unit circle for the first two vectors, then the third in
    // closed form (the normalized contraction), then local refinement.
    fn grid_oracle(t: &OffsetTensor) -> f64 {
        let eval = |a: f64, b: f64| {
            let x = [a.cos(), a.sin()];
            let y = [b.cos(), b.sin()];
            let v = crate::tensor::contract_all_but_one(t, &[&x, &y], 2).unwrap();
            norm2(&v)
        };
        let steps = 720;
        let mut best = (0.0, 0.0, 0.0);
        for i in 0..steps {
            for j in 0..steps {
                let (a, b) = (i as f64 * std::f64::consts::PI * 2.0 / steps as f64, j as f64 * std::f64::consts::PI * 2.0 / steps as f64);
                let v = eval(a, b);
                if v > best.0 {
                    best = (v, a, b);
                }
            }
        }
        let (mut v, mut a, mut b) = best;
        let mut h = std::f64::consts::PI / steps as f64;
        while h > 1e-12 {
            let mut improved = false;
            for (da, db) in [(h, 0.0), (-h, 0.0), (0.0, h), (0.0, -h)] {
                let c = eval(a + da, b + db);
                if c > v {
                    v = c;
                    a += da;
                    b += db;
                    improved = true;
                }
            }
            if !improved {
                h /= 2.0;
            }
        }
        v
    }

    #[test]
    fn hopm_matches_grid_oracle_on_2x2x2() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for trial in 0..8 {
            let vals: Vec<f64> = (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let d = crate::tensor::DenseTensor::new(shape(3, 2), vals).unwrap();
            let t: OffsetTensor = SparseTensor::from_dense(&d).into();
            let want = grid_oracle(&t);
            let got = hopm_lower(&t, &cfg(trial)).unwrap().value;
            assert!((got - want).abs() < 1e-4, "trial {trial}: hopm {got} vs grid {want}");
        }
    }

    #[test]
    fn slice_of_single_slice_tensor_is_matrix_norm() {
        let s = shape(3, 3);
        // matrix [[3,0,0],[0,1,0],[0,0,0]] placed at slice (·,·,1)
        let t = SparseTensor::from_entries(s, vec![(vec![0, 0, 0], 3.0), (vec![1, 1, 0], 1.0)]).unwrap();
        let r = slice_lower(&t.into(), 1, &cfg(5)).unwrap();
        assert!((r.value - 3.0).abs() < 1e-12);
        let z = OffsetTensor::zeros(s);
        assert_eq!(slice_lower(&z, 3, &cfg(5)).unwrap().value, 0.0);
        assert!(slice_lower(&OffsetTensor::zeros(shape(2, 3)), 1, &cfg(5)).is_err());
    }

    #[test]
    fn slice_bound_below_hopm() {
        for seed in 0..20u64 {
            let s = shape(3, 3);
            let t = bernoulli_sample(s, &ProbabilityModel::homogeneous(0.4).unwrap(), SeedSpec::new(seed, 9)).unwrap();
            let w = center(&t, &ProbabilityModel::homogeneous(0.4).unwrap()).unwrap();
            let sl = slice_lower(&w, 4, &cfg(seed)).unwrap().value;
            let hp = hopm_lower(&w, &cfg(seed)).unwrap().value;
            assert!(sl <= hp + 1e-8, "seed {seed}: slice {sl} > hopm {hp}");
        }
    }

    #[test]
    fn sandwich_on_ones_is_tight() {
        let t = OffsetTensor::all_ones(shape(3, 2));
        let e = spectral_sandwich(&t, 1, &cfg(6)).unwrap();
        let want = 2.0 * 2f64.sqrt();
        assert!((e.lower - want).abs() < 1e-6 && (e.upper - want).abs() < 1e-6, "{e:?}");
    }

    #[test]
    fn sandwich_on_zero() {
        let e = spectral_sandwich(&OffsetTensor::zeros(shape(3, 4)), 2, &cfg(0)).unwrap();
        assert_eq!((e.lower, e.upper), (0.0, 0.0));
        assert!(spectral_sandwich(&OffsetTensor::zeros(shape(3, 4)), 3, &cfg(0)).is_err());
    }

    #[test]
    fn sandwich_on_centered_bernoulli() {
        let s = shape(3, 40);
        let model = ProbabilityModel::homogeneous(0.2).unwrap();
        let t = bernoulli_sample(s, &model, SeedSpec::new(12, 0)).unwrap();
        let w = center(&t, &model).unwrap();
        for m in [1, 2] {
            let e = spectral_sandwich(&w, m, &cfg(12)).unwrap();
            assert!(e.lower.is_finite() && e.upper.is_finite());
            assert!(e.lower > 0.0);
            assert!(e.lower <= e.upper + SANDWICH_SLACK, "m={m}: {e:?}");
            let again = multilinear_form(&w, &e.lower_witness).unwrap().abs();
            assert!((again - e.lower).abs() <= 1e-8 * e.lower);
            if m == 1 {
                let chain = e.chain_upper.unwrap();
                assert!(chain + SANDWICH_SLACK >= e.lower);
            }
        }
    }

    #[test]
    fn config_validation() {
        let c = PowerIterConfig { restarts: 0, ..PowerIterConfig::default() };
        assert!(c.validate().is_err());
        let c = PowerIterConfig { matrix_tolerance: 0.0, ..PowerIterConfig::default() };
        assert!(c.validate().is_err());
    }
}
