use serde::Serialize;

use super::check_delta;
use crate::error::{Error, Result};
use crate::spectral::{hopm_lower, PowerIterConfig};
use crate::tensor::{contract_all_but_one, OffsetTensor};

/// Largest dimension [`lattice_net`] enumerates.
pub const NET_MAX_DIM: usize = 4;

/// Grid points `x` of the closed unit ball with `√n·x_i/δ ∈ ℤ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeNet {
    pub n: usize,
    pub delta: f64,
    pub points: Vec<Vec<f64>>,
}

impl LatticeNet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Volume-argument bound `exp(n·ln(7/δ))` on the cardinality.
    pub fn cardinality_bound(&self) -> f64 {
        (self.n as f64 * (7.0 / self.delta).ln()).exp()
    }
}

pub fn lattice_net(n: usize, delta: f64) -> Result<LatticeNet> {
    check_delta(delta)?;
    if n == 0 || n > NET_MAX_DIM {
        return Err(Error::OutOfRange(format!("lattice nets are enumerated for 1 <= n <= {NET_MAX_DIM}, got {n}")));
    }
    let h = delta / (n as f64).sqrt();
    // Σ (a_i h)^2 <= 1  <=>  Σ a_i^2 <= n / δ^2, compared with a relative cushion
    let radius2 = n as f64 / (delta * delta) * (1.0 + 1e-12);
    let amax = radius2.sqrt().floor() as i64;
    let mut points = Vec::new();
    let mut a = vec![-amax; n];
    loop {
        let s: i64 = a.iter().map(|v| v * v).sum();
        if s as f64 <= radius2 {
            points.push(a.iter().map(|&v| v as f64 * h).collect());
        }
        let mut j = n;
        loop {
            if j == 0 {
                return Ok(LatticeNet { n, delta, points });
            }
            j -= 1;
            if a[j] < amax {
                a[j] += 1;
                break;
            }
            a[j] = -amax;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NetSupremum {
    /// `sup_{y ∈ net^k} |T(y_1, ..., y_k)|`.
    pub sup: f64,
    /// `(1-δ)^{-k}·sup`.
    pub bound: f64,
    pub hopm: f64,
    pub slack: f64,
    pub within: bool,
}

/// Compares the power-method value against the net bound
/// `‖T‖ ≤ (1-δ)^{-k} sup_{net^k} |T(y_1, ..., y_k)|`.
pub fn net_supremum_check(t: &OffsetTensor, delta: f64, config: &PowerIterConfig) -> Result<NetSupremum> {
    let (k, n) = (t.order(), t.dim());
    if n > 3 || k > 3 {
        return Err(Error::OutOfRange(format!("net supremum needs n <= 3 and k <= 3, got n = {n}, k = {k}")));
    }
    let net = lattice_net(n, delta)?;
    let pts = &net.points;
    let mut sup = 0.0f64;
    let mut idx = vec![0usize; k - 1];
    loop {
        let others: Vec<&[f64]> = idx.iter().map(|&i| pts[i].as_slice()).collect();
        let v = contract_all_but_one(t, &others, k - 1)?;
        if v.iter().any(|x| *x != 0.0) {
            for y in pts {
                let d: f64 = v.iter().zip(y).map(|(a, b)| a * b).sum();
                sup = sup.max(d.abs());
            }
        }
        let mut j = k - 1;
        loop {
            if j == 0 {
                let bound = sup / (1.0 - delta).powi(k as i32);
                let hopm = hopm_lower(t, config)?.value;
                return Ok(NetSupremum { sup, bound, hopm, slack: bound - hopm, within: hopm <= bound + 1e-8 });
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < pts.len() {
                break;
            }
            idx[j] = 0;
        }
    }
}
