use nalgebra::DMatrix;
use num_complex::Complex64;

use super::mixed::check_exponent;
use super::sequence_norm;
use crate::error::{LabError, Result};
use crate::spectral::CompactOperatorRep;

/// Singular values of `D^{1/2} M D^{1/2}`, `D = diag(weights)`, decreasing.
///
/// With cell measures as weights these are the singular values of the
/// integral operator whose kernel `M` is sampled on the grid.
pub fn singular_values(m: &DMatrix<Complex64>, weights: &[f64]) -> Result<Vec<f64>> {
    if m.nrows() != m.ncols() || m.nrows() != weights.len() {
        return Err(LabError::DimensionMismatch(format!(
            "{}x{} matrix with {} weights",
            m.nrows(),
            m.ncols(),
            weights.len()
        )));
    }
    if m.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(LabError::NonFinite("operator matrix"));
    }
    if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
        return Err(LabError::NonFinite("quadrature weights"));
    }
    let root: Vec<f64> = weights.iter().map(|w| w.sqrt()).collect();
    let sym = DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * (root[i] * root[j]));
    let mut sv: Vec<f64> = sym.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// `‖M‖_{𝔖^α}` of the weighted operator matrix; `α = ∞` is the operator norm.
pub fn schatten_norm(m: &DMatrix<Complex64>, weights: &[f64], alpha: f64) -> Result<f64> {
    check_exponent("alpha", alpha)?;
    let sv = singular_values(m, weights)?;
    sequence_norm(&sv, alpha)
}

/// For the finite-rank representation the Schatten norm is `‖λ‖_{ℓ^α}` exactly.
pub fn schatten_norm_of(op: &CompactOperatorRep, alpha: f64) -> Result<f64> {
    sequence_norm(op.eigenvalues(), alpha)
}

/// `(∫∫ |K(x,y)|² dx dy)^{1/2}` with product cell measures.
pub fn kernel_l2_norm(m: &DMatrix<Complex64>, weights: &[f64]) -> Result<f64> {
    if m.nrows() != weights.len() || m.ncols() != weights.len() {
        return Err(LabError::DimensionMismatch("kernel and weights disagree".into()));
    }
    let mut acc = 0.0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            acc += m[(i, j)].norm_sqr() * weights[i] * weights[j];
        }
    }
    Ok(acc.sqrt())
}
