//! Experiment configuration: one JSON object per experiment, with dotted
//! `key=value` overrides applied on top.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use tensorconc_core::diagnostics::LemmaConstants;
use tensorconc_core::{FamilySpec, PowerIterConfig};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Centered Bernoulli tensor, spectral sandwich.
    Concentration,
    /// As `concentration`, after degree regularization.
    Regularize,
    /// ER hypergraph, bounded-degree expander, mixing check.
    Expander,
    /// Uniform sparsification of the all-ones tensor.
    Sparsify,
    /// Degree and discrepancy lemma checks.
    Diagnostics,
}

impl Command {
    pub const ALL: [Command; 5] =
        [Command::Concentration, Command::Regularize, Command::Expander, Command::Sparsify, Command::Diagnostics];

    pub fn name(self) -> &'static str {
        match self {
            Command::Concentration => "concentration",
            Command::Regularize => "regularize",
            Command::Expander => "expander",
            Command::Sparsify => "sparsify",
            Command::Diagnostics => "diagnostics",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| HarnessError::Config(format!("unknown command {s:?}")))
    }
}

/// How `p` depends on `n`. `m` falls back to the experiment's `m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case", deny_unknown_fields)]
pub enum PRule {
    /// `p = c·ln(n) / n^m`.
    ConstCLognOverNm { c: f64, m: Option<usize> },
    /// `p = c / n^m`.
    ConstCOverNm { c: f64, m: Option<usize> },
    Fixed { p: f64 },
}

impl PRule {
    pub fn p(&self, n: usize, default_m: usize) -> f64 {
        let nf = n as f64;
        match *self {
            PRule::ConstCLognOverNm { c, m } => c * nf.ln() / nf.powi(m.unwrap_or(default_m) as i32),
            PRule::ConstCOverNm { c, m } => c / nf.powi(m.unwrap_or(default_m) as i32),
            PRule::Fixed { p } => p,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Command,
    pub k: usize,
    pub n_list: Vec<usize>,
    pub p_rule: PRule,
    pub m: usize,
    pub trials: usize,
    pub base_seed: u64,
    pub estimator: PowerIterConfig,
    /// Skip the spectral sandwich (lower = upper = 0) for pure lemma checks.
    pub estimate_norm: bool,
    pub constants: LemmaConstants,
    pub families: FamilySpec,
    pub out: Option<String>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self::for_command(Command::Concentration)
    }
}

impl ExperimentConfig {
    /// The built-in sweep for each command.
    pub fn for_command(command: Command) -> Self {
        let base = ExperimentConfig {
            command,
            k: 3,
            n_list: vec![30, 60, 120],
            p_rule: PRule::ConstCLognOverNm { c: 5.0, m: None },
            m: 2,
            trials: 20,
            base_seed: 20_240_601,
            estimator: PowerIterConfig::default(),
            estimate_norm: true,
            constants: LemmaConstants::default(),
            families: FamilySpec::default(),
            out: None,
        };
        match command {
            Command::Concentration => base,
            Command::Regularize => ExperimentConfig {
                k: 4,
                n_list: vec![25],
                p_rule: PRule::ConstCOverNm { c: 3.0, m: None },
                trials: 50,
                ..base
            },
            Command::Expander => ExperimentConfig {
                n_list: vec![60, 120],
                p_rule: PRule::ConstCOverNm { c: 40.0, m: None },
                trials: 10,
                ..base
            },
            Command::Sparsify => ExperimentConfig { n_list: vec![60], ..base },
            Command::Diagnostics => ExperimentConfig {
                n_list: vec![100],
                m: 1,
                estimate_norm: false,
                families: FamilySpec { samples: 5000, allow_exhaustive: true },
                ..base
            },
        }
    }

    /// Reads a JSON config; missing keys take the defaults of `command`.
    pub fn load(path: &Path, command: Command) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path.display().to_string(), e))?;
        let value: Value =
            serde_json::from_str(&text).map_err(|e| HarnessError::Parse(format!("{}: {e}", path.display())))?;
        Self::from_value(value, command)
    }

    pub fn from_value(value: Value, command: Command) -> Result<Self> {
        let mut merged = serde_json::to_value(Self::for_command(command)).expect("config serializes");
        merge(&mut merged, value);
        merged["command"] = Value::String(command.name().into());
        serde_json::from_value(merged).map_err(|e| HarnessError::Config(e.to_string()))
    }

    /// Applies `key=value` with dotted keys; the value is parsed as JSON and
    /// taken as a string when that fails.
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        let (key, raw) = assignment
            .split_once('=')
            .ok_or_else(|| HarnessError::Config(format!("override {assignment:?} is not key=value")))?;
        let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
        let mut root = serde_json::to_value(&*self).expect("config serializes");
        let mut slot = &mut root;
        for part in key.split('.') {
            let obj = slot
                .as_object_mut()
                .ok_or_else(|| HarnessError::Config(format!("cannot set {key:?}: {part:?} is not inside an object")))?;
            slot = obj.entry(part.to_string()).or_insert(Value::Null);
        }
        *slot = value;
        *self = serde_json::from_value(root).map_err(|e| HarnessError::Config(format!("after --set {key}: {e}")))?;
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(HarnessError::Config(msg));
        if self.k < 2 {
            return bad(format!("k = {} must be at least 2", self.k));
        }
        if self.m == 0 || self.m >= self.k {
            return bad(format!("m = {} not in [1, k-1]", self.m));
        }
        if self.n_list.is_empty() {
            return bad("n_list is empty".into());
        }
        if self.n_list.windows(2).any(|w| w[0] >= w[1]) {
            return bad("n_list must be strictly ascending".into());
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.command == Command::Expander && self.n_list[0] < self.k {
            return bad(format!("expander needs n >= k = {}", self.k));
        }
        if !self.n_list.iter().all(|&n| n >= 1) {
            return bad("every n must be positive".into());
        }
        for &n in &self.n_list {
            let p = self.p_rule.p(n, self.m);
            if !(p > 0.0 && p <= 1.0) {
                return bad(format!("p rule gives p = {p} at n = {n}, outside (0, 1]"));
            }
            if matches!(self.command, Command::Expander) && p >= 1.0 {
                return bad(format!("expander mixing needs p < 1, got {p} at n = {n}"));
            }
        }
        self.estimator.validate().map_err(|e| HarnessError::Config(e.to_string()))?;
        if self.command == Command::Diagnostics {
            self.constants.validate().map_err(|e| HarnessError::Config(e.to_string()))?;
        }
        Ok(())
    }
}

fn merge(base: &mut Value, patch: Value) {
    match (base, patch) {
        (Value::Object(b), Value::Object(p)) => {
            for (k, v) in p {
                // tagged enums are replaced whole so stale fields do not leak across variants
                if k == "p_rule" {
                    b.insert(k, v);
                } else {
                    merge(b.entry(k).or_insert(Value::Null), v);
                }
            }
        }
        (b, p) => *b = p,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_rules() {
        let r = PRule::ConstCLognOverNm { c: 5.0, m: None };
        assert!((r.p(30, 2) - 5.0 * 30f64.ln() / 900.0).abs() < 1e-15);
        assert_eq!(PRule::ConstCOverNm { c: 3.0, m: Some(2) }.p(25, 1), 3.0 / 625.0);
        assert_eq!(PRule::Fixed { p: 0.25 }.p(7, 2), 0.25);
    }

    #[test]
    fn overrides() {
        let mut c = ExperimentConfig::default();
        c.apply_override("trials=3").unwrap();
        c.apply_override("estimator.restarts=4").unwrap();
        c.apply_override("n_list=[8,16]").unwrap();
        c.apply_override(r#"p_rule={"rule":"fixed","p":0.5}"#).unwrap();
        assert_eq!(c.trials, 3);
        assert_eq!(c.estimator.restarts, 4);
        assert_eq!(c.n_list, vec![8, 16]);
        assert_eq!(c.p_rule, PRule::Fixed { p: 0.5 });
        assert!(c.apply_override("trials").is_err());
        assert!(c.apply_override("trials=many").is_err());
        assert!(c.apply_override("bogus=1").is_err());
    }

    #[test]
    fn partial_file_keeps_defaults() {
        let v: Value = serde_json::json!({"k": 2, "n_list": [8], "p_rule": {"rule": "fixed", "p": 1.0}, "m": 1});
        let c = ExperimentConfig::from_value(v, Command::Concentration).unwrap();
        assert_eq!((c.k, c.m, c.trials), (2, 1, 20));
        c.validate().unwrap();
    }

    #[test]
    fn validation() {
        let mut c = ExperimentConfig::default();
        c.n_list = vec![60, 30];
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::default();
        c.p_rule = PRule::Fixed { p: 0.0 };
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::default();
        c.m = 3;
        assert!(c.validate().is_err());
        for cmd in Command::ALL {
            ExperimentConfig::for_command(cmd).validate().unwrap();
        }
    }
}
