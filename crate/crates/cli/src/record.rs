//! Result rows and their fixed CSV layout.

use std::io::Write;

use serde::{Deserialize, Serialize};
use tensorconc_core::tensor::format_sig17;

use crate::error::{HarnessError, Result};

pub const CSV_HEADER: [&str; 14] = [
    "command", "k", "n", "p", "m", "trial", "seed", "lower", "upper", "sqrt_nmp", "ratio_lower", "ratio_upper",
    "aux", "wall_ms",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub command: String,
    pub k: usize,
    pub n: usize,
    pub p: f64,
    pub m: usize,
    pub trial: usize,
    pub seed: u64,
    pub lower: f64,
    pub upper: f64,
    pub sqrt_nmp: f64,
    pub ratio_lower: f64,
    pub ratio_upper: f64,
    /// `key=value` pairs joined by `;`.
    pub aux: String,
    pub wall_ms: u64,
}

impl ResultRecord {
    /// Value of `key` in the aux column.
    pub fn aux_value(&self, key: &str) -> Option<&str> {
        self.aux.split(';').find_map(|kv| kv.split_once('=').filter(|(k, _)| *k == key).map(|(_, v)| v))
    }

    pub fn aux_f64(&self, key: &str) -> Option<f64> {
        self.aux_value(key).and_then(|v| v.parse().ok())
    }

    fn fields(&self) -> [String; 14] {
        [
            self.command.clone(),
            self.k.to_string(),
            self.n.to_string(),
            format_sig17(self.p),
            self.m.to_string(),
            self.trial.to_string(),
            self.seed.to_string(),
            format_sig17(self.lower),
            format_sig17(self.upper),
            format_sig17(self.sqrt_nmp),
            format_sig17(self.ratio_lower),
            format_sig17(self.ratio_upper),
            self.aux.clone(),
            self.wall_ms.to_string(),
        ]
    }
}

/// Builder for the aux column.
#[derive(Debug, Default, Clone)]
pub struct Aux(Vec<(String, String)>);

impl Aux {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num(mut self, key: &str, v: f64) -> Self {
        self.0.push((key.into(), format_sig17(v)));
        self
    }

    pub fn int(mut self, key: &str, v: impl ToString) -> Self {
        self.0.push((key.into(), v.to_string()));
        self
    }

    pub fn finish(self) -> String {
        self.0.into_iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
    }
}

pub fn write_csv<W: Write>(out: W, records: &[ResultRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let map = |e: csv::Error| HarnessError::Parse(e.to_string());
    w.write_record(CSV_HEADER).map_err(map)?;
    for r in records {
        w.write_record(r.fields()).map_err(map)?;
    }
    w.flush().map_err(|e| HarnessError::io("csv output", e))
}

pub fn to_csv_string(records: &[ResultRecord]) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, records).expect("writing to memory");
    String::from_utf8(buf).expect("csv is utf-8")
}

pub fn read_csv(text: &str) -> Result<Vec<ResultRecord>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| HarnessError::Parse(e.to_string()))?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(HarnessError::Parse(format!("unexpected header {:?}", header.iter().collect::<Vec<_>>())));
    }
    r.deserialize()
        .map(|row| row.map_err(|e| HarnessError::Parse(e.to_string())))
        .collect()
}

/// The CSV with the `wall_ms` column blanked, for byte comparisons.
pub fn mask_wall_ms(csv_text: &str) -> String {
    csv_text
        .lines()
        .map(|l| match l.rfind(',') {
            Some(i) => &l[..i],
            None => l,
        })
        .collect::<Vec<_>>()
        .join("\n")
}
