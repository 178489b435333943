use super::mixed::check_exponent;
use crate::error::{LabError, Result};
use crate::spectral::Grid1D;

/// Weak Lorentz norm `‖f‖_{L^{p,∞}} = sup_s s α_f(s)^{1/p}` via the discrete
/// decreasing rearrangement.
///
/// Samples are sorted by `|f|`; the `k`-th largest is paired with the measure
/// of the `k` largest cells, which is `kΔx` on a uniform grid.
pub fn lorentz_weak_norm_weighted(values: &[f64], weights: &[f64], p: f64) -> Result<f64> {
    check_exponent("p", p)?;
    if p.is_infinite() {
        return Err(LabError::InvalidExponent("weak Lorentz norm needs finite p".into()));
    }
    if values.len() != weights.len() {
        return Err(LabError::DimensionMismatch(format!("{} values with {} weights", values.len(), weights.len())));
    }
    let mut pairs: Vec<(f64, f64)> = values.iter().zip(weights).map(|(v, w)| (v.abs(), *w)).collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut measure = 0.0;
    let mut best = 0.0f64;
    for (v, w) in pairs {
        measure += w;
        best = best.max(v * measure.powf(1.0 / p));
    }
    Ok(best)
}

/// [`lorentz_weak_norm_weighted`] with the grid's cell measures.
pub fn lorentz_weak_norm(values: &[f64], grid: &Grid1D, p: f64) -> Result<f64> {
    lorentz_weak_norm_weighted(values, grid.weights(), p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indicator() {
        let n = 1000;
        let dx = 1.0 / n as f64;
        let a = 0.3;
        let vals: Vec<f64> = (0..n).map(|i| if (i as f64 + 0.5) * dx < a { 1.0 } else { 0.0 }).collect();
        let w = vec![dx; n];
        assert!((lorentz_weak_norm_weighted(&vals, &w, 2.0).unwrap() - a.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn zero_field() {
        assert_eq!(lorentz_weak_norm_weighted(&[0.0; 8], &[0.1; 8], 2.0).unwrap(), 0.0);
    }

    #[test]
    fn inverse_square_root() {
        // analytic: α_f(s) = min(1, s^{-2}), so sup_s s α_f(s)^{1/2} = 1
        let n = 4096;
        let dx = 1.0 / n as f64;
        let vals: Vec<f64> = (1..=n).map(|i| (i as f64 * dx).powf(-0.5)).collect();
        let w = vec![dx; n];
        assert!((lorentz_weak_norm_weighted(&vals, &w, 2.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mismatched_lengths() {
        assert!(lorentz_weak_norm_weighted(&[1.0, 2.0], &[1.0], 2.0).is_err());
        assert!(lorentz_weak_norm_weighted(&[1.0], &[1.0], f64::INFINITY).is_err());
    }
}
