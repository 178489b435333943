use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::spectral::{density_function, CompactOperatorRep};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub t: f64,
    /// `sup_x |ρ_{γ(t)}(x) − ρ_{γ₀}(x)|`
    pub sup_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub geometry: String,
    pub rank: usize,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    /// Last nonzero-time deviation over the first, in the order of `t_list`.
    pub fn decay_ratio(&self) -> f64 {
        let nonzero: Vec<_> = self.rows.iter().filter(|r| r.t != 0.0).collect();
        match (nonzero.first(), nonzero.last()) {
            (Some(a), Some(b)) if a.sup_deviation > 0.0 => b.sup_deviation / a.sup_deviation,
            _ => 0.0,
        }
    }

    /// Deviations never grow as `t` decreases by more than the relative slack `tol`.
    pub fn is_monotone(&self, tol: f64) -> bool {
        let mut rows: Vec<_> = self.rows.clone();
        rows.sort_by(|a, b| b.t.abs().total_cmp(&a.t.abs()));
        rows.windows(2).all(|w| w[1].sup_deviation <= w[0].sup_deviation * (1.0 + tol))
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let io = |e: csv::Error| LabError::Io(format!("csv write failed: {e}"));
        out.write_record(["t", "sup_deviation"]).map_err(io)?;
        for r in &self.rows {
            out.write_record([r.t.to_string(), r.sup_deviation.to_string()]).map_err(io)?;
        }
        out.flush().map_err(|e| LabError::Io(format!("csv write failed: {e}")))
    }
}

/// `t ↦ sup_x |ρ_{γ(t)} − ρ_{γ₀}|` over `t_list`.
///
/// Both densities go through the same transform path, so `t = 0` gives exactly 0.
pub fn pointwise_convergence_scan(op: &CompactOperatorRep, t_list: &[f64]) -> Result<ConvergenceTable> {
    let grid = op
        .system()
        .grid()
        .cloned()
        .ok_or_else(|| LabError::Degenerate("convergence scan needs a nonzero operator".into()))?;
    let rho0 = density_function(op, 0.0, None)?;
    let rows = t_list
        .par_iter()
        .map(|&t| {
            let rho = density_function(op, t, None)?;
            let sup_deviation = rho.values.iter().zip(&rho0.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            Ok(ConvergenceRow { t, sup_deviation })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceTable { geometry: grid.geometry().name().to_string(), rank: op.rank(), rows })
}

/// `2^{-m}` for `m` in `lo..=hi`.
pub fn dyadic_times(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi).map(|m| 2f64.powi(-m)).collect()
}
