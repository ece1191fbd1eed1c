use rand::Rng;

use super::PowerIterConfig;
use crate::error::{Error, Result};
use crate::rng::Domain;
use crate::tensor::norm2;

/// CSR matrix plus a constant background `c`, i.e. `S + c·1·1ᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    vals: Vec<f64>,
    background: f64,
}

impl SparseMatrix {
    /// `triplets` must be sorted by `(row, col)` without duplicates.
    pub fn from_sorted_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, f64)>,
        background: f64,
    ) -> Result<Self> {
        let mut row_ptr = vec![0usize; rows + 1];
        let mut col_idx = Vec::new();
        let mut vals = Vec::new();
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::CoordinateOutOfRange {
                    coord: vec![r as u64, c as u64],
                    dims: vec![rows as u64, cols as u64],
                });
            }
            if let Some(prev) = last {
                if prev >= (r, c) {
                    return Err(Error::DimensionMismatch("triplets not strictly sorted".into()));
                }
            }
            last = Some((r, c));
            row_ptr[r + 1] += 1;
            col_idx.push(c);
            vals.push(v);
        }
        for r in 0..rows {
            row_ptr[r + 1] += row_ptr[r];
        }
        Ok(Self { rows, cols, row_ptr, col_idx, vals, background })
    }

    /// Builds from unsorted triplets; duplicates are summed.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, f64)>,
        background: f64,
    ) -> Result<Self> {
        let mut t: Vec<_> = triplets.into_iter().collect();
        t.sort_by_key(|e| (e.0, e.1));
        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(t.len());
        for (r, c, v) in t {
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        Self::from_sorted_triplets(rows, cols, merged, background)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn background(&self) -> f64 {
        self.background
    }

    pub fn is_zero(&self) -> bool {
        self.background == 0.0 && self.vals.iter().all(|&v| v == 0.0)
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let range = self.row_ptr[r]..self.row_ptr[r + 1];
        let pos = self.col_idx[range.clone()].binary_search(&c);
        self.background + pos.map_or(0.0, |p| self.vals[range.start + p])
    }

    /// `out = M v`.
    pub fn matvec(&self, v: &[f64], out: &mut [f64]) {
        let shift = if self.background != 0.0 { self.background * v.iter().sum::<f64>() } else { 0.0 };
        for (r, o) in out.iter_mut().enumerate() {
            let mut acc = shift;
            for p in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.vals[p] * v[self.col_idx[p]];
            }
            *o = acc;
        }
    }

    /// `out = Mᵀ u`.
    pub fn matvec_t(&self, u: &[f64], out: &mut [f64]) {
        let shift = if self.background != 0.0 { self.background * u.iter().sum::<f64>() } else { 0.0 };
        out.iter_mut().for_each(|o| *o = shift);
        for r in 0..self.rows {
            let ur = u[r];
            if ur == 0.0 {
                continue;
            }
            for p in self.row_ptr[r]..self.row_ptr[r + 1] {
                out[self.col_idx[p]] += self.vals[p] * ur;
            }
        }
    }

    /// Dense row-major copy; callers are expected to keep this small.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut d = vec![self.background; self.rows * self.cols];
        for r in 0..self.rows {
            for p in self.row_ptr[r]..self.row_ptr[r + 1] {
                d[r * self.cols + self.col_idx[p]] += self.vals[p];
            }
        }
        d
    }
}

/// Dominant singular triple found by power iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixNorm {
    /// `uᵀ M v`, an achieved value and so a lower bound on `σ_max`.
    pub value: f64,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Objective after every iteration of the best run.
    pub history: Vec<f64>,
}

fn unit_basis(len: usize) -> Vec<f64> {
    let mut e = vec![0.0; len];
    if let Some(first) = e.first_mut() {
        *first = 1.0;
    }
    e
}

fn run_power(m: &SparseMatrix, start: &[f64], tol: f64, max_iter: usize) -> MatrixNorm {
    let mut v = start.to_vec();
    let nv = norm2(&v);
    if nv == 0.0 {
        v = unit_basis(m.cols);
    } else {
        v.iter_mut().for_each(|x| *x /= nv);
    }
    let mut u = vec![0.0; m.rows];
    let mut z = vec![0.0; m.cols];
    let mut history = Vec::new();
    let mut best_u = unit_basis(m.rows);
    let mut prev = f64::NAN;
    let mut stable = 0;
    let mut converged = false;
    let mut iterations = 0;
    for _ in 0..max_iter {
        iterations += 1;
        m.matvec(&v, &mut u);
        let sigma = norm2(&u);
        if sigma == 0.0 {
            converged = true;
            history.push(0.0);
            break;
        }
        u.iter_mut().for_each(|x| *x /= sigma);
        m.matvec_t(&u, &mut z);
        // ‖Mᵀu‖ = uᵀ M (Mᵀu / ‖Mᵀu‖) >= uᵀ M v = sigma
        let value = norm2(&z);
        z.iter_mut().for_each(|x| *x /= value);
        std::mem::swap(&mut v, &mut z);
        best_u.copy_from_slice(&u);
        history.push(value);
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
    let value = history.last().copied().unwrap_or(0.0);
    if value == 0.0 {
        return MatrixNorm {
            value: 0.0,
            left: unit_basis(m.rows),
            right: unit_basis(m.cols),
            iterations,
            converged,
            history,
        };
    }
    MatrixNorm { value, left: best_u, right: v, iterations, converged, history }
}

/// One power run from `start` alone.
pub(crate) fn power_from(m: &SparseMatrix, config: &PowerIterConfig, start: &[f64]) -> Result<MatrixNorm> {
    config.validate()?;
    if start.len() != m.cols {
        return Err(Error::DimensionMismatch(format!("start vector of length {} for {} columns", start.len(), m.cols)));
    }
    if m.rows == 0 || m.cols == 0 || m.is_zero() {
        return matrix_op_norm_seeded(m, config, &[]);
    }
    Ok(run_power(m, start, config.matrix_tolerance, config.max_iterations))
}

/// Largest singular value of `m` by alternating power iteration, best over
/// `config.restarts` random starts.
pub fn matrix_op_norm(m: &SparseMatrix, config: &PowerIterConfig) -> Result<MatrixNorm> {
    matrix_op_norm_seeded(m, config, &[])
}

/// As [`matrix_op_norm`], with extra right-hand start vectors tried first.
pub fn matrix_op_norm_seeded(m: &SparseMatrix, config: &PowerIterConfig, starts: &[Vec<f64>]) -> Result<MatrixNorm> {
    config.validate()?;
    for s in starts {
        if s.len() != m.cols {
            return Err(Error::DimensionMismatch(format!("start vector of length {} for {} columns", s.len(), m.cols)));
        }
    }
    if m.rows == 0 || m.cols == 0 || m.is_zero() {
        return Ok(MatrixNorm {
            value: 0.0,
            left: unit_basis(m.rows),
            right: unit_basis(m.cols),
            iterations: 0,
            converged: true,
            history: Vec::new(),
        });
    }
    let tol = config.matrix_tolerance;
    let mut best: Option<MatrixNorm> = None;
    let mut total = 0;
    let mut consider = |r: MatrixNorm, total: &mut usize| {
        *total += r.iterations;
        if best.as_ref().is_none_or(|b| r.value > b.value) {
            best = Some(r);
        }
    };
    for s in starts {
        consider(run_power(m, s, tol, config.max_iterations), &mut total);
    }
    for restart in 0..config.restarts {
        let mut rng = config.seed.rng(Domain::PowerRestart, restart as u64);
        let start: Vec<f64> = (0..m.cols).map(|_| rng.gen_range(-1.0..1.0)).collect();
        consider(run_power(m, &start, tol, config.max_iterations), &mut total);
    }
    let mut best = best.expect("at least one restart");
    best.iterations = total;
    Ok(best)
}
