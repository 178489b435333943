use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

/// Least-squares fit of `log y = a + b log N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerFit {
    pub slope: f64,
    pub intercept: f64,
    /// Largest absolute deviation of `log y` from the fitted line.
    pub residual: f64,
}

/// Fits a power law to `(N, value)` pairs in log–log coordinates.
pub fn fit_exponent(pairs: &[(f64, f64)]) -> Result<PowerFit> {
    if pairs.len() < 3 {
        return Err(LabError::Degenerate(format!("a scaling fit needs at least 3 points, got {}", pairs.len())));
    }
    if let Some((n, v)) = pairs.iter().find(|(n, v)| !(*n > 0.0 && *v > 0.0 && n.is_finite() && v.is_finite())) {
        return Err(LabError::Degenerate(format!("nonpositive or non-finite point ({n}, {v})")));
    }
    let xs: Vec<f64> = pairs.iter().map(|(n, _)| n.ln()).collect();
    let ys: Vec<f64> = pairs.iter().map(|(_, v)| v.ln()).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(LabError::Degenerate("all N values coincide".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).abs()).fold(0.0, f64::max);
    Ok(PowerFit { slope, intercept, residual })
}

/// A measured quantity across `N` with its fitted and claimed exponents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub n_values: Vec<f64>,
    pub measured: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    pub residual: f64,
    pub claimed_exponent: f64,
}

impl ScalingFit {
    pub fn new(n_values: Vec<f64>, measured: Vec<f64>, claimed_exponent: f64) -> Result<Self> {
        if n_values.len() != measured.len() {
            return Err(LabError::DimensionMismatch("N values and measurements differ in length".into()));
        }
        let pairs: Vec<(f64, f64)> = n_values.iter().copied().zip(measured.iter().copied()).collect();
        let fit = fit_exponent(&pairs)?;
        Ok(Self {
            n_values,
            measured,
            slope: fit.slope,
            intercept: fit.intercept,
            residual: fit.residual,
            claimed_exponent,
        })
    }

    /// `|slope − claimed| ≤ tol`.
    pub fn matches_claim(&self, tol: f64) -> bool {
        (self.slope - self.claimed_exponent).abs() <= tol
    }

    /// `slope ≤ claimed + tol`, the reading for upper bounds.
    pub fn within_claim(&self, tol: f64) -> bool {
        self.slope <= self.claimed_exponent + tol
    }

    /// Largest over smallest measurement.
    pub fn spread(&self) -> f64 {
        let hi = self.measured.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = self.measured.iter().cloned().fold(f64::INFINITY, f64::min);
        hi / lo
    }
}
