use serde::Serialize;

use crate::error::{Error, Result};
use crate::tensor::ProbabilityModel;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KlRecord {
    pub kl: f64,
    /// `‖θ - θ'‖_F² / (a(1-b))`.
    pub bound: f64,
    pub within: bool,
}

/// `q·ln(q/r)` with `0·ln(0/r) = 0`.
fn xlogx_over(q: f64, r: f64) -> f64 {
    if q == 0.0 {
        0.0
    } else if r == 0.0 {
        f64::INFINITY
    } else {
        q * (q / r).ln()
    }
}

fn kl_entry(p: f64, q: f64) -> f64 {
    if p == q {
        return 0.0;
    }
    xlogx_over(p, q) + xlogx_over(1.0 - p, 1.0 - q)
}

/// Entry lists of the two models, aligned. Two homogeneous models count as a
/// single entry; a homogeneous model against a dense one is broadcast.
fn entries(theta: &ProbabilityModel, theta_prime: &ProbabilityModel) -> Result<Vec<(f64, f64)>> {
    use ProbabilityModel::{Dense, Homogeneous};
    Ok(match (theta, theta_prime) {
        (Homogeneous(p), Homogeneous(q)) => vec![(*p, *q)],
        (Dense(a), Dense(b)) => {
            a.shape().check_same(&b.shape())?;
            a.data().iter().copied().zip(b.data().iter().copied()).collect()
        }
        (Homogeneous(p), Dense(b)) => b.data().iter().map(|&q| (*p, q)).collect(),
        (Dense(a), Homogeneous(q)) => a.data().iter().map(|&p| (p, *q)).collect(),
    })
}

/// KL divergence between product Bernoulli laws and its quadratic bound for
/// entries confined to `[a, b]`.
pub fn kl_bernoulli(theta: &ProbabilityModel, theta_prime: &ProbabilityModel, a: f64, b: f64) -> Result<KlRecord> {
    if !(0.0 <= a && a < b && b <= 1.0) {
        return Err(Error::OutOfRange(format!("need 0 <= a < b <= 1, got a = {a}, b = {b}")));
    }
    let pairs = entries(theta, theta_prime)?;
    if let Some(&(p, q)) = pairs.iter().find(|(p, q)| !(a..=b).contains(p) || !(a..=b).contains(q)) {
        return Err(Error::OutOfRange(format!("entries ({p}, {q}) leave [{a}, {b}]")));
    }
    let kl: f64 = pairs.iter().map(|&(p, q)| kl_entry(p, q)).sum();
    let num: f64 = pairs.iter().map(|&(p, q)| (p - q) * (p - q)).sum();
    let den = a * (1.0 - b);
    let bound = if num == 0.0 { 0.0 } else if den == 0.0 { f64::INFINITY } else { num / den };
    Ok(KlRecord { kl, bound, within: kl <= bound + 1e-12 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hom(p: f64) -> ProbabilityModel {
        ProbabilityModel::homogeneous(p).unwrap()
    }

    #[test]
    fn hand_value() {
        let r = kl_bernoulli(&hom(0.5), &hom(0.25), 0.0, 1.0).unwrap();
        assert!((r.kl - 0.5 * (4.0f64 / 3.0).ln()).abs() < 1e-12);
        assert!(r.within);
    }

    #[test]
    fn equal_models() {
        let r = kl_bernoulli(&hom(0.3), &hom(0.3), 0.2, 0.8).unwrap();
        assert_eq!((r.kl, r.bound), (0.0, 0.0));
        assert!(r.within);
    }

    #[test]
    fn boundary_conventions() {
        assert_eq!(kl_entry(0.0, 0.5), 0.5f64.ln().abs());
        assert_eq!(kl_entry(0.5, 0.0), f64::INFINITY);
        assert_eq!(kl_entry(1.0, 1.0), 0.0);
        assert!(kl_bernoulli(&hom(0.1), &hom(0.5), 0.2, 0.8).is_err());
        assert!(kl_bernoulli(&hom(0.5), &hom(0.5), 0.8, 0.2).is_err());
    }
}
