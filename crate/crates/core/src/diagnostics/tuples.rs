use serde::Serialize;

use crate::error::{Error, Result};
use crate::tensor::{multilinear_form, OffsetTensor, VectorTuple};

/// Light/heavy split of `[n]^k` by `|y_{1,i_1}⋯y_{k,i_k}|` against `√(np)/n`.
/// The heavy set is enumerated; light is its complement.
#[derive(Debug, Clone, PartialEq)]
pub struct TupleSplit {
    pub threshold: f64,
    /// Heavy coordinates, sorted.
    pub heavy: Vec<Vec<u32>>,
    /// `Σ_heavy |∏ y|`.
    pub heavy_mass: f64,
}

fn abs_product(ys: &VectorTuple, coord: &[u32]) -> f64 {
    coord.iter().enumerate().fold(1.0, |acc, (j, &i)| acc * ys.get(j)[i as usize].abs())
}

impl TupleSplit {
    pub fn is_heavy(&self, ys: &VectorTuple, coord: &[u32]) -> bool {
        abs_product(ys, coord) > self.threshold
    }

    pub fn light_count(&self, n: usize, k: usize) -> u128 {
        (n as u128).pow(k as u32) - self.heavy.len() as u128
    }
}

/// Depth-first over modes with each mode's indices sorted by magnitude; a
/// branch stops once even the largest completion cannot exceed the threshold.
pub fn split_tuples(ys: &VectorTuple, p: f64) -> Result<TupleSplit> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::OutOfRange(format!("p = {p} not in (0, 1]")));
    }
    let (k, n) = (ys.len(), ys.dim());
    let threshold = (n as f64 * p).sqrt() / n as f64;
    let orders: Vec<Vec<u32>> = (0..k)
        .map(|j| {
            let y = ys.get(j);
            let mut idx: Vec<u32> = (0..n as u32).collect();
            idx.sort_by(|&a, &b| y[b as usize].abs().total_cmp(&y[a as usize].abs()));
            idx
        })
        .collect();
    // suffix[j] = ∏_{r >= j} max_i |y_{r,i}|
    let mut suffix = vec![1.0; k + 1];
    for j in (0..k).rev() {
        suffix[j] = suffix[j + 1] * ys.get(j).iter().fold(0.0f64, |m, v| m.max(v.abs()));
    }
    let cushion = threshold * (1.0 - 1e-12);
    let mut heavy = Vec::new();
    let mut coord = vec![0u32; k];
    #[allow(clippy::too_many_arguments)]
    fn walk(
        j: usize,
        partial: f64,
        ys: &VectorTuple,
        orders: &[Vec<u32>],
        suffix: &[f64],
        cushion: f64,
        threshold: f64,
        coord: &mut Vec<u32>,
        heavy: &mut Vec<Vec<u32>>,
    ) {
        if j == coord.len() {
            if partial > threshold {
                heavy.push(coord.clone());
            }
            return;
        }
        let y = ys.get(j);
        for &i in &orders[j] {
            let next = partial * y[i as usize].abs();
            if next * suffix[j + 1] <= cushion {
                break;
            }
            coord[j] = i;
            walk(j + 1, next, ys, orders, suffix, cushion, threshold, coord, heavy);
        }
    }
    walk(0, 1.0, ys, &orders, &suffix, cushion, threshold, &mut coord, &mut heavy);
    heavy.sort_unstable();
    let heavy_mass = heavy.iter().map(|c| abs_product(ys, c)).sum();
    Ok(TupleSplit { threshold, heavy, heavy_mass })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LightContribution {
    pub light: f64,
    pub heavy: f64,
    pub total: f64,
    /// `|light| / √(np)`.
    pub ratio: f64,
    pub heavy_count: usize,
}

/// `Σ_light y_{1,i_1}⋯y_{k,i_k} w_{i_1..i_k}` computed as the full form minus
/// the enumerated heavy part.
pub fn light_contribution_check(w: &OffsetTensor, ys: &VectorTuple, p: f64) -> Result<LightContribution> {
    let split = split_tuples(ys, p)?;
    let total = multilinear_form(w, ys)?;
    let heavy: f64 = split
        .heavy
        .iter()
        .map(|c| {
            let prod = c.iter().enumerate().fold(1.0, |acc, (j, &i)| acc * ys.get(j)[i as usize]);
            prod * w.value_at(c)
        })
        .sum();
    let light = total - heavy;
    let scale = (w.dim() as f64 * p).sqrt();
    Ok(LightContribution { light, heavy, total, ratio: light.abs() / scale, heavy_count: split.heavy.len() })
}
