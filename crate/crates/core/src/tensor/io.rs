//! Text serialization: a header line `k n nnz background` followed by one
//! `i1 ... ik value` line per entry, 1-based, in canonical order.

use std::fmt::Write as _;

use super::{OffsetTensor, SparseTensor, TensorShape};
use crate::error::{Error, Result};

/// Scientific notation with 17 significant digits; round-trips every `f64`.
pub fn format_sig17(v: f64) -> String {
    format!("{v:.16e}")
}

impl OffsetTensor {
    pub fn to_text(&self) -> String {
        let sp = self.sparse();
        let mut out = String::with_capacity(32 + sp.nnz() * (12 + 6 * sp.order()));
        let _ = writeln!(
            out,
            "{} {} {} {}",
            sp.order(),
            sp.dim(),
            sp.nnz(),
            format_sig17(self.background())
        );
        for (c, v) in sp.iter() {
            for i in c {
                let _ = write!(out, "{} ", i + 1);
            }
            out.push_str(&format_sig17(v));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let parse_err = |line: usize, msg: String| Error::Parse { line: line + 1, msg };
        let (hl, header) = lines.next().ok_or_else(|| parse_err(0, "missing header".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(parse_err(hl, format!("header needs 4 fields, found {}", fields.len())));
        }
        let k: usize = fields[0].parse().map_err(|e| parse_err(hl, format!("order: {e}")))?;
        let n: usize = fields[1].parse().map_err(|e| parse_err(hl, format!("dim: {e}")))?;
        let nnz: usize = fields[2].parse().map_err(|e| parse_err(hl, format!("nnz: {e}")))?;
        let background: f64 = fields[3].parse().map_err(|e| parse_err(hl, format!("background: {e}")))?;
        let shape = TensorShape::new(k, n)?;
        let mut entries = Vec::with_capacity(nnz);
        for (ln, line) in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != k + 1 {
                return Err(parse_err(ln, format!("entry needs {} fields, found {}", k + 1, f.len())));
            }
            let mut coord = Vec::with_capacity(k);
            for s in &f[..k] {
                let i: u32 = s.parse().map_err(|e| parse_err(ln, format!("index {s}: {e}")))?;
                if i == 0 || i as usize > n {
                    return Err(parse_err(ln, format!("index {i} outside [1, {n}]")));
                }
                coord.push(i - 1);
            }
            let v: f64 = f[k].parse().map_err(|e| parse_err(ln, format!("value: {e}")))?;
            entries.push((coord, v));
        }
        if entries.len() != nnz {
            return Err(parse_err(0, format!("header declares {nnz} entries, found {}", entries.len())));
        }
        let sparse = SparseTensor::from_entries(shape, entries)?;
        OffsetTensor::new(sparse, background)
    }
}

impl SparseTensor {
    pub fn to_text(&self) -> String {
        OffsetTensor::from(self.clone()).to_text()
    }
}
