use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

/// One sampled parameter tuple of a decay scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub params: Vec<f64>,
    pub magnitude: f64,
    pub bound: f64,
    /// `magnitude / bound`, the empirical constant at this sample.
    pub ratio: f64,
}

/// Observed magnitudes next to the claimed bound they are tested against.
///
/// Decay claims carry unspecified constants, so the report only ever
/// exposes normalized ratios and their maxima over parameter slices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayScanReport {
    pub param_names: Vec<String>,
    pub bound_expr: String,
    /// Indices into `param_names` whose values identify a slice.
    pub slice_by: Vec<usize>,
    pub rows: Vec<DecayRow>,
}

impl DecayScanReport {
    pub fn new(param_names: &[&str], bound_expr: impl Into<String>, slice_by: &[usize]) -> Self {
        Self {
            param_names: param_names.iter().map(|s| s.to_string()).collect(),
            bound_expr: bound_expr.into(),
            slice_by: slice_by.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, params: Vec<f64>, magnitude: f64, bound: f64) -> Result<()> {
        if params.len() != self.param_names.len() {
            return Err(LabError::DimensionMismatch(format!(
                "{} parameters for columns {:?}",
                params.len(),
                self.param_names
            )));
        }
        if !(magnitude.is_finite() && magnitude >= 0.0) {
            return Err(LabError::NonFinite("scan magnitude"));
        }
        if !(bound.is_finite() && bound > 0.0) {
            return Err(LabError::OutOfRange(format!("claimed bound must be positive, got {bound}")));
        }
        self.rows.push(DecayRow { params, magnitude, bound, ratio: magnitude / bound });
        Ok(())
    }

    /// Maximal ratio per slice, in order of first appearance.
    pub fn slice_maxima(&self) -> Vec<(Vec<f64>, f64)> {
        let mut out: Vec<(Vec<f64>, f64)> = Vec::new();
        for row in &self.rows {
            let key: Vec<f64> = self.slice_by.iter().map(|&i| row.params[i]).collect();
            match out.iter_mut().find(|(k, _)| *k == key) {
                Some((_, m)) => *m = m.max(row.ratio),
                None => out.push((key, row.ratio)),
            }
        }
        out
    }

    pub fn max_ratio(&self) -> f64 {
        self.rows.iter().fold(0.0, |m, r| m.max(r.ratio))
    }

    /// Largest over smallest slice maximum; 1 for a single slice.
    pub fn spread(&self) -> f64 {
        let maxima = self.slice_maxima();
        let hi = maxima.iter().fold(0.0f64, |m, (_, v)| m.max(*v));
        let lo = maxima.iter().fold(f64::INFINITY, |m, (_, v)| m.min(*v));
        if maxima.is_empty() {
            1.0
        } else {
            hi / lo
        }
    }

    /// Restriction to rows whose parameter `name` equals `value`.
    pub fn filter(&self, name: &str, value: f64) -> Result<Self> {
        let idx = self
            .param_names
            .iter()
            .position(|p| p == name)
            .ok_or_else(|| LabError::OutOfRange(format!("no parameter named {name}")))?;
        Ok(Self { rows: self.rows.iter().filter(|r| r.params[idx] == value).cloned().collect(), ..self.clone() })
    }

    /// CSV with columns `params…, magnitude, bound, ratio`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        let io = |e: csv::Error| LabError::Io(format!("csv: {e}"));
        let mut header = self.param_names.clone();
        header.extend(["magnitude", "bound", "ratio"].map(String::from));
        wr.write_record(&header).map_err(io)?;
        for r in &self.rows {
            let mut rec: Vec<String> = r.params.iter().map(|v| v.to_string()).collect();
            rec.extend([r.magnitude, r.bound, r.ratio].map(|v| v.to_string()));
            wr.write_record(&rec).map_err(io)?;
        }
        wr.flush().map_err(|e| LabError::Io(format!("csv: {e}")))?;
        Ok(())
    }
}
