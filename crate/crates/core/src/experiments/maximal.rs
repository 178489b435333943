use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::CheckMode;
use super::systems::band_limited_system;
use crate::error::{LabError, Result};
use crate::norms::{lorentz_weak_norm, sequence_norm};
use crate::randomization::substream;
use crate::spectral::{lift_system, propagate_many, weighted_density, CompactOperatorRep, Grid1D, InnerProduct};

/// Sobolev order of the maximal-in-time estimate on the line.
pub const MAXIMAL_SOBOLEV_ORDER: f64 = 0.25;

/// `‖ sup_{t∈[0,T]} |ρ_{γ(t)}| ‖_{L^{2,∞}_x} / ‖λ‖_{ℓ^β}` on the line.
///
/// The supremum runs over `t_samples` equispaced times including both ends.
/// The system must be `Ḣ^{1/4}`-orthonormal, and in bound mode `β < 2`.
pub fn maximal_in_time_ratio(
    op: &CompactOperatorRep,
    beta: f64,
    t_end: f64,
    t_samples: usize,
    mode: CheckMode,
) -> Result<f64> {
    if mode == CheckMode::Bound && !(beta < 2.0) {
        return Err(LabError::Inadmissible(format!("β = {beta} must be below 2 for the maximal-in-time bound")));
    }
    if op.system().inner_product() != (InnerProduct::HomSobolev { s: MAXIMAL_SOBOLEV_ORDER }) {
        return Err(LabError::Inadmissible("the maximal-in-time bound needs an Ḣ^{1/4}-orthonormal system".into()));
    }
    if t_samples < 2 || !(t_end > 0.0) {
        return Err(LabError::OutOfRange(format!("need t_end > 0 and at least 2 samples, got {t_end}, {t_samples}")));
    }
    let grid = op
        .system()
        .grid()
        .cloned()
        .ok_or_else(|| LabError::Degenerate("the maximal function of a rank-0 operator is zero".into()))?;
    let times: Vec<f64> = (0..t_samples).map(|i| t_end * i as f64 / (t_samples - 1) as f64).collect();
    let evolved = op.system().functions().par_iter().map(|f| propagate_many(f, &times)).collect::<Result<Vec<_>>>()?;
    let mut sup = vec![0.0f64; grid.len()];
    for i in 0..times.len() {
        let us: Vec<_> = evolved.iter().map(|e| e[i].clone()).collect();
        for (m, v) in sup.iter_mut().zip(weighted_density(&grid, op.eigenvalues(), &us)) {
            *m = m.max(v.abs());
        }
    }
    Ok(lorentz_weak_norm(&sup, &grid, 2.0)? / sequence_norm(op.eigenvalues(), beta)?)
}

/// Parameters of the rank sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MaximalConfig {
    pub beta: f64,
    pub ranks: Vec<usize>,
    pub trials: usize,
    /// Frequency band `0 < |ξ| ≤ band` of the underlying L² system.
    pub band: f64,
    /// Right end of the time interval `[0, T]`.
    pub t_end: f64,
    pub t_samples: usize,
    #[serde(skip)]
    pub seed: u64,
    pub mode: CheckMode,
}

impl Default for MaximalConfig {
    fn default() -> Self {
        Self {
            beta: 1.5,
            ranks: vec![1, 2, 4, 8, 16],
            trials: 4,
            band: 2.0,
            t_end: 1.0,
            t_samples: 65,
            seed: 7,
            mode: CheckMode::Bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximalRow {
    pub rank: usize,
    pub ratios: Vec<f64>,
    pub max_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximalSweep {
    pub config: MaximalConfig,
    pub rows: Vec<MaximalRow>,
}

impl MaximalSweep {
    /// Largest over smallest per-rank maximum.
    pub fn spread(&self) -> f64 {
        let hi = self.rows.iter().map(|r| r.max_ratio).fold(f64::NEG_INFINITY, f64::max);
        let lo = self.rows.iter().map(|r| r.max_ratio).fold(f64::INFINITY, f64::min);
        hi / lo
    }
}

/// Random `Ḣ^{1/4}`-orthonormal operator with unit eigenvalues on the default line grid.
pub fn lifted_line_operator(band: f64, rank: usize, seed: u64, index: u64) -> Result<CompactOperatorRep> {
    let grid = Arc::new(Grid1D::default_line());
    // the smallest nonzero frequency on the grid is 2π/L; exclude ξ = 0 only
    let lo = 0.5 * 2.0 * std::f64::consts::PI / grid.period().expect("periodic");
    let sys = band_limited_system(&grid, lo, band, rank, &mut substream(seed, index))?;
    CompactOperatorRep::new(vec![1.0; rank], lift_system(&sys, MAXIMAL_SOBOLEV_ORDER)?)
}

/// The maximal-in-time ratio across ranks, `trials` systems per rank.
pub fn maximal_rank_sweep(cfg: &MaximalConfig) -> Result<MaximalSweep> {
    if cfg.ranks.is_empty() || cfg.trials == 0 {
        return Err(LabError::OutOfRange("need at least one rank and one trial".into()));
    }
    let rows = cfg
        .ranks
        .iter()
        .map(|&rank| {
            let ratios = (0..cfg.trials)
                .map(|i| {
                    let op = lifted_line_operator(cfg.band, rank, cfg.seed, ((rank as u64) << 16) | i as u64)?;
                    maximal_in_time_ratio(&op, cfg.beta, cfg.t_end, cfg.t_samples, cfg.mode)
                })
                .collect::<Result<Vec<_>>>()?;
            let max_ratio = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            Ok(MaximalRow { rank, ratios, max_ratio })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MaximalSweep { config: cfg.clone(), rows })
}
