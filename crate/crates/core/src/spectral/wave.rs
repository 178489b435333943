use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::{Geometry, Grid1D};
use crate::error::{LabError, Result};
use crate::fft;

/// Inner product a system is declared orthonormal under.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InnerProduct {
    L2,
    /// Homogeneous Sobolev `Ḣ^s`: `L Σ_{ξ≠0} |ξ|^{2s} f̂(ξ) conj(ĝ(ξ))`.
    HomSobolev {
        s: f64,
    },
}

/// Radial eigenfunction `e_m(r) = sin(mπr) / ((2π)^{1/2} r)` of the unit ball.
pub fn ball_eigenfunction(m: usize, r: f64) -> f64 {
    (m as f64 * PI * r).sin() / ((2.0 * PI).sqrt() * r)
}

/// Complex samples of a function on a [`Grid1D`].
///
/// On the ball the eigenbasis coefficients `c_m` (index `m-1`) are the
/// primary representation when present; point values are derived from them.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    grid: Arc<Grid1D>,
    values: Vec<Complex64>,
    coeffs: Option<Vec<Complex64>>,
}

impl WaveFunction {
    pub fn new(grid: Arc<Grid1D>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(LabError::DimensionMismatch(format!("{} values on a {}-point grid", values.len(), grid.len())));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(LabError::NonFinite("wave function values"));
        }
        Ok(Self { grid, values, coeffs: None })
    }

    pub fn from_fn(grid: Arc<Grid1D>, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = grid.points().iter().map(|&x| f(x)).collect();
        Self::new(grid, values)
    }

    pub fn zeros(grid: Arc<Grid1D>) -> Self {
        let n = grid.len();
        let coeffs = (grid.geometry() == Geometry::BallRadial).then(Vec::new);
        Self { grid, values: vec![Complex64::new(0.0, 0.0); n], coeffs }
    }

    /// Builds a periodic function from its Fourier coefficients `f̂_k` in DFT
    /// order, `f(x) = Σ_k f̂_k e^{iξ_k x}`.
    pub fn from_fourier(grid: Arc<Grid1D>, coeffs: &[Complex64]) -> Result<Self> {
        let values = synthesize(&grid, coeffs)?;
        Self::new(grid, values)
    }

    /// The plane wave `e^{iξ_k x}` for integer wavenumber `k`.
    pub fn plane_wave(grid: Arc<Grid1D>, k: i64) -> Result<Self> {
        let period = grid.period().ok_or(LabError::UnsupportedGeometry { op: "plane_wave", geometry: "ball" })?;
        let xi = 2.0 * PI * k as f64 / period;
        Self::from_fn(grid, |x| Complex64::from_polar(1.0, xi * x))
    }

    /// Radial function `Σ_m c_m e_m` on the ball; `coeffs[m-1] = c_m`.
    pub fn ball_from_coeffs(grid: Arc<Grid1D>, coeffs: Vec<Complex64>) -> Result<Self> {
        if grid.geometry() != Geometry::BallRadial {
            return Err(LabError::UnsupportedGeometry { op: "ball_from_coeffs", geometry: grid.geometry().name() });
        }
        if coeffs.len() >= grid.len() {
            return Err(LabError::DimensionMismatch(format!(
                "{} ball modes need more than {} radial points",
                coeffs.len(),
                grid.len()
            )));
        }
        if coeffs.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(LabError::NonFinite("ball coefficients"));
        }
        let values = ball_values(&grid, &coeffs);
        Ok(Self { grid, values, coeffs: Some(coeffs) })
    }

    pub fn grid(&self) -> &Arc<Grid1D> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn coeffs(&self) -> Option<&[Complex64]> {
        self.coeffs.as_deref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Fourier coefficients `f̂_k` in DFT order, referenced to `x = 0`.
    pub fn fourier_coefficients(&self) -> Result<Vec<Complex64>> {
        analyze(&self.grid, &self.values)
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
            coeffs: self.coeffs.as_ref().map(|cs| cs.iter().map(|v| v * c).collect()),
        }
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: Complex64, other: &Self) -> Result<Self> {
        self.check_same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + c * b).collect();
        let coeffs = match (&self.coeffs, &other.coeffs) {
            (Some(a), Some(b)) => {
                let n = a.len().max(b.len());
                let zero = Complex64::new(0.0, 0.0);
                Some(
                    (0..n).map(|i| a.get(i).copied().unwrap_or(zero) + c * b.get(i).copied().unwrap_or(zero)).collect(),
                )
            }
            _ => None,
        };
        Ok(Self { grid: self.grid.clone(), values, coeffs })
    }

    pub(crate) fn check_same_grid(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.grid, &other.grid) || self.grid == other.grid {
            Ok(())
        } else {
            Err(LabError::GridMismatch("functions live on different grids".into()))
        }
    }

    pub fn inner(&self, other: &Self, ip: InnerProduct) -> Result<Complex64> {
        self.check_same_grid(other)?;
        match ip {
            InnerProduct::L2 => Ok(self.l2_inner(other)),
            InnerProduct::HomSobolev { s } => {
                let a = self.sobolev_coordinates(s)?;
                let b = other.sobolev_coordinates(s)?;
                Ok(a.iter().zip(&b).map(|(x, y)| x * y.conj()).sum())
            }
        }
    }

    fn l2_inner(&self, other: &Self) -> Complex64 {
        if let (Some(a), Some(b)) = (&self.coeffs, &other.coeffs) {
            return a.iter().zip(b).map(|(x, y)| x * y.conj()).sum();
        }
        self.values.iter().zip(&other.values).zip(self.grid.weights()).map(|((x, y), w)| x * y.conj() * w).sum()
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_inner(self).re.max(0.0).sqrt()
    }

    pub fn norm(&self, ip: InnerProduct) -> Result<f64> {
        Ok(self.inner(self, ip)?.re.max(0.0).sqrt())
    }

    /// Coordinates in which the `Ḣ^s` inner product is Euclidean:
    /// `√L |ξ_k|^s f̂_k`, zero mode dropped.
    pub(crate) fn sobolev_coordinates(&self, s: f64) -> Result<Vec<Complex64>> {
        let period = self
            .grid
            .period()
            .ok_or(LabError::UnsupportedGeometry { op: "homogeneous Sobolev inner product", geometry: "ball" })?;
        let xi = self.grid.frequencies()?;
        let coeffs = self.fourier_coefficients()?;
        let root = period.sqrt();
        Ok(coeffs
            .iter()
            .zip(&xi)
            .map(|(c, &k)| if k == 0.0 { Complex64::new(0.0, 0.0) } else { c * root * k.abs().powf(s) })
            .collect())
    }

    pub(crate) fn from_parts(grid: Arc<Grid1D>, values: Vec<Complex64>, coeffs: Option<Vec<Complex64>>) -> Self {
        Self { grid, values, coeffs }
    }
}

pub(crate) fn ball_values(grid: &Grid1D, coeffs: &[Complex64]) -> Vec<Complex64> {
    grid.points()
        .iter()
        .map(|&r| coeffs.iter().enumerate().map(|(i, c)| c * ball_eigenfunction(i + 1, r)).sum())
        .collect()
}

/// Projects point values onto the first `modes` ball eigenfunctions,
/// `c_m = ∫ f e_m dx` with the grid's radial quadrature.
pub fn ball_project(grid: &Grid1D, values: &[Complex64], modes: usize) -> Vec<Complex64> {
    (1..=modes)
        .map(|m| {
            grid.points()
                .iter()
                .zip(grid.weights())
                .zip(values)
                .map(|((&r, &w), v)| v * ball_eigenfunction(m, r) * w)
                .sum()
        })
        .collect()
}

pub(crate) fn analyze(grid: &Grid1D, values: &[Complex64]) -> Result<Vec<Complex64>> {
    let xi = grid.frequencies()?;
    let n = values.len() as f64;
    let x0 = grid.origin();
    let mut buf = values.to_vec();
    fft::forward(&mut buf);
    for (c, k) in buf.iter_mut().zip(&xi) {
        *c *= Complex64::from_polar(1.0 / n, -k * x0);
    }
    Ok(buf)
}

pub(crate) fn synthesize(grid: &Grid1D, coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    if coeffs.len() != grid.len() {
        return Err(LabError::DimensionMismatch(format!(
            "{} Fourier coefficients on a {}-point grid",
            coeffs.len(),
            grid.len()
        )));
    }
    let xi = grid.frequencies()?;
    let n = coeffs.len() as f64;
    let x0 = grid.origin();
    let mut buf: Vec<Complex64> = coeffs.iter().zip(&xi).map(|(c, k)| c * Complex64::from_polar(n, k * x0)).collect();
    fft::inverse(&mut buf);
    Ok(buf)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_wave_has_unit_coefficient() {
        let grid = Arc::new(Grid1D::line(20.0, 32).unwrap());
        let f = WaveFunction::plane_wave(grid.clone(), -3).unwrap();
        let c = f.fourier_coefficients().unwrap();
        let bin = grid.bin_of(-3).unwrap();
        for (i, v) in c.iter().enumerate() {
            let expect = if i == bin { 1.0 } else { 0.0 };
            assert!((v - Complex64::new(expect, 0.0)).norm() < 1e-12, "bin {i}: {v}");
        }
        let back = WaveFunction::from_fourier(grid, &c).unwrap();
        for (a, b) in back.values().iter().zip(f.values()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn ball_eigenfunctions_are_orthonormal_on_the_grid() {
        let grid = Arc::new(Grid1D::ball_radial(64).unwrap());
        for m in 1..6 {
            for k in 1..6 {
                let vm: Vec<Complex64> = grid.points().iter().map(|&r| ball_eigenfunction(m, r).into()).collect();
                let vk: Vec<Complex64> = grid.points().iter().map(|&r| ball_eigenfunction(k, r).into()).collect();
                let f = WaveFunction::new(grid.clone(), vm).unwrap();
                let g = WaveFunction::new(grid.clone(), vk).unwrap();
                let ip = f.inner(&g, InnerProduct::L2).unwrap();
                let expect = if m == k { 1.0 } else { 0.0 };
                assert!((ip.re - expect).abs() < 1e-12 && ip.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn ball_projection_recovers_coefficients() {
        let grid = Arc::new(Grid1D::ball_radial(64).unwrap());
        let c = vec![Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.0), Complex64::new(0.0, 0.7)];
        let f = WaveFunction::ball_from_coeffs(grid.clone(), c.clone()).unwrap();
        let back = ball_project(&grid, f.values(), 3);
        for (a, b) in c.iter().zip(&back) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let grid = Arc::new(Grid1D::torus(8).unwrap());
        assert!(WaveFunction::new(grid, vec![Complex64::new(1.0, 0.0); 7]).is_err());
    }

    #[test]
    fn sobolev_inner_product_weights_frequencies() {
        let grid = Arc::new(Grid1D::torus(16).unwrap());
        let f = WaveFunction::plane_wave(grid, 2).unwrap();
        let n = f.norm(InnerProduct::HomSobolev { s: 0.5 }).unwrap();
        // ‖e^{2ix}‖² = 2π · |2|^{1}
        assert!((n * n - 4.0 * PI).abs() < 1e-12);
    }
}
