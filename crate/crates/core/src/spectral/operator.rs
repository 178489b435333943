use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::grid::Grid1D;
use super::propagator::propagate;
use super::system::OrthonormalSystem;
use super::wave::WaveFunction;
use crate::error::{LabError, Result};

/// Largest grid for which [`operator_kernel`] materializes the `n × n` kernel.
pub const KERNEL_POINT_LIMIT: usize = 4096;

/// Finite-rank operator `γ₀ = Σ_j λ_j |f_j⟩⟨f_j|` over an orthonormal system.
#[derive(Debug, Clone, PartialEq)]
pub struct CompactOperatorRep {
    eigenvalues: Vec<f64>,
    system: OrthonormalSystem,
}

impl CompactOperatorRep {
    pub fn new(eigenvalues: Vec<f64>, system: OrthonormalSystem) -> Result<Self> {
        if eigenvalues.len() != system.len() {
            return Err(LabError::DimensionMismatch(format!(
                "{} eigenvalues for a rank-{} system",
                eigenvalues.len(),
                system.len()
            )));
        }
        if eigenvalues.iter().any(|l| !l.is_finite()) {
            return Err(LabError::NonFinite("eigenvalues"));
        }
        Ok(Self { eigenvalues, system })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn system(&self) -> &OrthonormalSystem {
        &self.system
    }

    pub fn rank(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn trace(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    /// Same system, eigenvalues multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self { eigenvalues: self.eigenvalues.iter().map(|l| l * c).collect(), system: self.system.clone() }
    }
}

/// Density `ρ_{γ(t)}(x)` sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityField {
    pub grid: Arc<Grid1D>,
    pub t: f64,
    pub values: Vec<f64>,
}

impl DensityField {
    /// `∫ ρ dx` with the grid quadrature.
    pub fn integral(&self) -> f64 {
        self.values.iter().zip(self.grid.weights()).map(|(v, w)| v * w).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// `Σ_j w_j |u_j(x)|²` for already-evolved functions.
pub fn weighted_density(grid: &Arc<Grid1D>, weights: &[f64], functions: &[WaveFunction]) -> Vec<f64> {
    let mut rho = vec![0.0; grid.len()];
    for (w, u) in weights.iter().zip(functions) {
        for (r, v) in rho.iter_mut().zip(u.values()) {
            *r += w * v.norm_sqr();
        }
    }
    rho
}

fn evolved(op: &CompactOperatorRep, t: f64) -> Result<Vec<WaveFunction>> {
    op.system.functions().par_iter().map(|f| propagate(f, t)).collect()
}

fn operator_grid(op: &CompactOperatorRep, grid: Option<&Arc<Grid1D>>) -> Result<Arc<Grid1D>> {
    match (op.system.grid(), grid) {
        (Some(g), Some(h)) if **g != **h => Err(LabError::GridMismatch("operator lives on a different grid".into())),
        (Some(g), _) => Ok(g.clone()),
        (None, Some(h)) => Ok(h.clone()),
        (None, None) => Err(LabError::Degenerate("rank-0 operator needs an explicit grid".into())),
    }
}

/// `ρ_{γ(t)}(x) = Σ_j λ_j |e^{itφ(D)} f_j(x)|²`.
///
/// `grid` is only consulted for rank-0 operators, whose density is zero.
pub fn density_function(op: &CompactOperatorRep, t: f64, grid: Option<&Arc<Grid1D>>) -> Result<DensityField> {
    let grid = operator_grid(op, grid)?;
    let us = evolved(op, t)?;
    Ok(DensityField { values: weighted_density(&grid, &op.eigenvalues, &us), grid, t })
}

/// The kernel `K(x,y,t) = Σ_j λ_j u_j(x) conj(u_j(y))`, `u_j = e^{itφ(D)} f_j`.
pub fn operator_kernel(op: &CompactOperatorRep, t: f64, grid: Option<&Arc<Grid1D>>) -> Result<DMatrix<Complex64>> {
    let grid = operator_grid(op, grid)?;
    let n = grid.len();
    if n > KERNEL_POINT_LIMIT {
        return Err(LabError::KernelTooLarge { points: n, limit: KERNEL_POINT_LIMIT });
    }
    let us = evolved(op, t)?;
    // K = U diag(λ) U*, with U holding the evolved functions as columns.
    let rank = us.len();
    let u = DMatrix::from_fn(n, rank, |i, j| us[j].values()[i]);
    let scaled = DMatrix::from_fn(n, rank, |i, j| us[j].values()[i] * op.eigenvalues[j]);
    Ok(scaled * u.adjoint())
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::spectral::system::gram_orthonormalize;
    use crate::spectral::wave::InnerProduct;

    fn small_op(grid: Arc<Grid1D>) -> CompactOperatorRep {
        let raw: Vec<_> = (0..3)
            .map(|j| {
                WaveFunction::from_fn(grid.clone(), |x| {
                    Complex64::new((x * (j + 1) as f64).cos() + 0.2 * j as f64, (x * 2.0).sin() * j as f64)
                })
                .unwrap()
            })
            .collect();
        let sys = gram_orthonormalize(&raw, InnerProduct::L2).unwrap();
        CompactOperatorRep::new(vec![0.5, -0.25, 1.5], sys).unwrap()
    }

    #[test]
    fn single_mode_density_is_flat() {
        let grid = Arc::new(Grid1D::torus(32).unwrap());
        let f = WaveFunction::plane_wave(grid.clone(), 3).unwrap().scaled((1.0 / (2.0 * PI).sqrt()).into());
        let op =
            CompactOperatorRep::new(vec![1.0], OrthonormalSystem::new(vec![f], InnerProduct::L2).unwrap()).unwrap();
        let rho = density_function(&op, 0.7, None).unwrap();
        assert!(rho.values.iter().all(|v| (v - 1.0 / (2.0 * PI)).abs() < 1e-12));
    }

    #[test]
    fn density_integrates_to_trace() {
        let op = small_op(Arc::new(Grid1D::torus(64).unwrap()));
        for t in [0.0, 0.3, 2.0] {
            let rho = density_function(&op, t, None).unwrap();
            assert!((rho.integral() - op.trace()).abs() < 1e-10);
        }
    }

    #[test]
    fn kernel_is_hermitian_with_density_diagonal() {
        let op = small_op(Arc::new(Grid1D::line(25.0, 48).unwrap()));
        let k = operator_kernel(&op, 0.4, None).unwrap();
        let rho = density_function(&op, 0.4, None).unwrap();
        for i in 0..48 {
            assert!((k[(i, i)].re - rho.values[i]).abs() < 1e-12);
            for j in 0..48 {
                assert!((k[(i, j)] - k[(j, i)].conj()).norm() < 1e-13);
            }
        }
        let dx = op.system().grid().unwrap().spacing();
        let tr: f64 = (0..48).map(|i| k[(i, i)].re * dx).sum();
        assert!((tr - op.trace()).abs() < 1e-10);
    }

    #[test]
    fn rank_zero_needs_grid_and_gives_zero() {
        let grid = Arc::new(Grid1D::torus(8).unwrap());
        let op = CompactOperatorRep::new(vec![], OrthonormalSystem::empty(InnerProduct::L2)).unwrap();
        assert!(density_function(&op, 0.1, None).is_err());
        let rho = density_function(&op, 0.1, Some(&grid)).unwrap();
        assert!(rho.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn kernel_budget() {
        let grid = Arc::new(Grid1D::torus(KERNEL_POINT_LIMIT + 2).unwrap());
        let op = CompactOperatorRep::new(vec![], OrthonormalSystem::empty(InnerProduct::L2)).unwrap();
        assert!(matches!(operator_kernel(&op, 0.0, Some(&grid)), Err(LabError::KernelTooLarge { .. })));
    }
}
