//! Per-n aggregation of a result CSV.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use crate::error::{HarnessError, Result};
use crate::record::{read_csv, ResultRecord};

/// Slack allowed between a row's lower and upper bound.
pub const SANDWICH_SLACK: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerN {
    pub rows: usize,
    pub median_ratio_upper: f64,
    pub max_ratio_upper: f64,
    pub median_ratio_lower: f64,
    pub max_ratio_lower: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fitted {
    /// Smallest `C` with `upper ≤ C·√(n^m p)` on every row.
    pub upper_constant: Option<f64>,
    /// Largest `c` with `lower ≥ c·√(n^m p)` on every row.
    pub lower_constant: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violations {
    /// Rows with `lower > upper + 1e-8`.
    pub sandwich: usize,
    /// Rows whose estimator did not report convergence.
    pub not_converged: usize,
    /// Rows whose aux carries a failing `*_within` flag or nonzero `violations`.
    pub checks: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub rows: usize,
    pub per_n: BTreeMap<usize, PerN>,
    pub fitted: Fitted,
    pub violations: Violations,
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn max(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn failed_checks(r: &ResultRecord) -> bool {
    r.aux.split(';').any(|kv| match kv.split_once('=') {
        Some((k, v)) if k.ends_with("_within") => v == "false",
        Some(("violations", v)) => v != "0",
        _ => false,
    })
}

pub fn summarize_records(records: &[ResultRecord]) -> Summary {
    let mut groups: BTreeMap<usize, Vec<&ResultRecord>> = BTreeMap::new();
    for r in records {
        groups.entry(r.n).or_default().push(r);
    }
    let per_n = groups
        .into_iter()
        .map(|(n, rows)| {
            let up: Vec<f64> = rows.iter().map(|r| r.ratio_upper).collect();
            let lo: Vec<f64> = rows.iter().map(|r| r.ratio_lower).collect();
            let s = PerN {
                rows: rows.len(),
                median_ratio_upper: median(up.clone()),
                max_ratio_upper: max(&up),
                median_ratio_lower: median(lo.clone()),
                max_ratio_lower: max(&lo),
            };
            (n, s)
        })
        .collect();
    let fitted = Fitted {
        upper_constant: records.iter().map(|r| r.ratio_upper).reduce(f64::max),
        lower_constant: records.iter().map(|r| r.ratio_lower).reduce(f64::min),
    };
    let violations = Violations {
        sandwich: records.iter().filter(|r| r.lower > r.upper + SANDWICH_SLACK).count(),
        not_converged: records.iter().filter(|r| r.aux_value("converged") == Some("false")).count(),
        checks: records.iter().filter(|r| failed_checks(r)).count(),
    };
    Summary { rows: records.len(), per_n, fitted, violations }
}

pub fn summarize(path: &Path) -> Result<Summary> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path.display().to_string(), e))?;
    if text.trim().is_empty() {
        return Ok(summarize_records(&[]));
    }
    Ok(summarize_records(&read_csv(&text)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn empty_summary() {
        let s = summarize_records(&[]);
        assert_eq!(s.rows, 0);
        assert!(s.per_n.is_empty());
        assert_eq!(s.fitted.upper_constant, None);
    }
}
