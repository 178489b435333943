use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::systems::{ball_system, band_limited_system};
use crate::error::Result;
use crate::randomization::substream;
use crate::spectral::{density_function, propagate, CompactOperatorRep, Grid1D};

/// Worst deviations over a batch of random operators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceSuiteReport {
    pub operators: usize,
    pub times: Vec<f64>,
    /// `max |∫ρ_{γ(t)} − Σλ_j| / Σ|λ_j|`
    pub max_trace_deviation: f64,
    /// `max |‖e^{itφ(D)} f_j‖ − ‖f_j‖|`
    pub max_unitarity_deviation: f64,
}

/// Random operator number `index`: the geometry cycles line, torus, ball;
/// rank in `1..=8`, eigenvalues uniform in `[−1, 1]`.
pub fn random_operator(seed: u64, index: u64) -> Result<CompactOperatorRep> {
    let mut rng = substream(seed, index);
    let rank = rng.random_range(1..=8);
    let sys = match index % 3 {
        0 => band_limited_system(&Arc::new(Grid1D::default_line()), 0.0, 3.0, rank, &mut rng)?,
        1 => band_limited_system(&Arc::new(Grid1D::torus(128)?), 0.0, 20.0, rank, &mut rng)?,
        _ => ball_system(&Arc::new(Grid1D::ball_radial(128)?), 16, rank, &mut rng)?,
    };
    let lambda = (0..rank).map(|_| rng.random_range(-1.0..=1.0)).collect();
    CompactOperatorRep::new(lambda, sys)
}

/// Checks trace conservation and unitarity for `n_ops` random operators at each time.
pub fn trace_unitarity_suite(n_ops: usize, seed: u64, times: &[f64]) -> Result<TraceSuiteReport> {
    let per_op = (0..n_ops as u64)
        .into_par_iter()
        .map(|i| -> Result<(f64, f64)> {
            let op = random_operator(seed, i)?;
            let abs: f64 = op.eigenvalues().iter().map(|l| l.abs()).sum();
            let mut trace = 0.0f64;
            let mut unitarity = 0.0f64;
            for &t in times {
                trace = trace.max((density_function(&op, t, None)?.integral() - op.trace()).abs() / abs);
                for f in op.system().functions() {
                    unitarity = unitarity.max((propagate(f, t)?.l2_norm() - f.l2_norm()).abs());
                }
            }
            Ok((trace, unitarity))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TraceSuiteReport {
        operators: n_ops,
        times: times.to_vec(),
        max_trace_deviation: per_op.iter().map(|p| p.0).fold(0.0, f64::max),
        max_unitarity_deviation: per_op.iter().map(|p| p.1).fold(0.0, f64::max),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometries_cycle() {
        let g: Vec<&str> =
            (0..3).map(|i| random_operator(1, i).unwrap().system().grid().unwrap().geometry().name()).collect();
        assert_eq!(g, vec!["line", "torus", "ball"]);
    }

    #[test]
    fn small_suite() {
        let r = trace_unitarity_suite(12, 3, &[0.0, 0.1, 1.0]).unwrap();
        assert!(r.max_trace_deviation <= 1e-8, "{r:?}");
        assert!(r.max_unitarity_deviation <= 1e-10, "{r:?}");
    }
}
