//! The Boussinesq propagator `e^{it√(∂⁴ - ∂²)}` as an exact Fourier multiplier.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use super::grid::{Geometry, Grid1D};
use super::wave::{analyze, ball_values, synthesize, WaveFunction};
use crate::error::{LabError, Result};
use crate::fft;

/// `φ(ξ) = √(ξ⁴ + ξ²)`.
pub fn boussinesq_symbol(xi: f64) -> f64 {
    let x2 = xi * xi;
    (x2 * x2 + x2).sqrt()
}

/// Ball dispersion `φ₃(m) = √((mπ)² + (mπ)⁴)`.
pub fn ball_symbol(m: usize) -> f64 {
    boussinesq_symbol(m as f64 * PI)
}

/// Applies `e^{itφ(D)}` to `f`.
///
/// Line and torus data are multiplied in frequency space; ball data must
/// carry eigenbasis coefficients, which pick up `e^{itφ₃(m)}`. At `t = 0` the
/// input is returned unchanged.
pub fn propagate(f: &WaveFunction, t: f64) -> Result<WaveFunction> {
    let grid = f.grid().clone();
    if grid.geometry() == Geometry::BallRadial {
        let coeffs = f.coeffs().ok_or(LabError::MissingBallCoefficients)?;
        if t == 0.0 {
            return Ok(f.clone());
        }
        let evolved: Vec<Complex64> =
            coeffs.iter().enumerate().map(|(i, c)| c * Complex64::from_polar(1.0, t * ball_symbol(i + 1))).collect();
        let values = ball_values(&grid, &evolved);
        return Ok(WaveFunction::from_parts(grid, values, Some(evolved)));
    }
    if t == 0.0 {
        return Ok(f.clone());
    }
    let xi = grid.frequencies()?;
    let mut buf = f.values().to_vec();
    fft::forward(&mut buf);
    for (c, &k) in buf.iter_mut().zip(&xi) {
        *c *= Complex64::from_polar(1.0, t * boussinesq_symbol(k));
    }
    fft::inverse(&mut buf);
    Ok(WaveFunction::from_parts(grid, buf, None))
}

/// Evaluates `e^{itφ(D)} f` at several times, sharing one forward transform.
pub fn propagate_many(f: &WaveFunction, times: &[f64]) -> Result<Vec<WaveFunction>> {
    if f.grid().geometry() == Geometry::BallRadial {
        return times.iter().map(|&t| propagate(f, t)).collect();
    }
    let grid = f.grid().clone();
    let xi = grid.frequencies()?;
    let mut spectrum = f.values().to_vec();
    fft::forward(&mut spectrum);
    times
        .iter()
        .map(|&t| {
            if t == 0.0 {
                return Ok(f.clone());
            }
            let mut buf: Vec<Complex64> = spectrum
                .iter()
                .zip(&xi)
                .map(|(c, &k)| c * Complex64::from_polar(1.0, t * boussinesq_symbol(k)))
                .collect();
            fft::inverse(&mut buf);
            Ok(WaveFunction::from_parts(grid.clone(), buf, None))
        })
        .collect()
}

fn check_cutoff(grid: &Grid1D, cutoff: usize) -> Result<()> {
    if grid.geometry() != Geometry::Torus {
        return Err(LabError::UnsupportedGeometry {
            op: "truncated_propagate_torus",
            geometry: grid.geometry().name(),
        });
    }
    if 2 * cutoff + 1 > grid.len() {
        return Err(LabError::BeyondNyquist { cutoff, points: grid.len() });
    }
    Ok(())
}

/// The frequency-truncated torus evolution
/// `𝒟_N f = (1/2π) Σ_{|k|≤N} f̂(k) e^{i(kx + t√(k²+k⁴))}`.
///
/// The `1/(2π)` prefactor is part of the operator. `f̂(k)` is the Fourier
/// series coefficient, so `𝒟_N e^{ijx} = (1/2π) e^{itφ(j)} e^{ijx}` for `|j| ≤ N`.
pub fn truncated_propagate_torus(f: &WaveFunction, t: f64, cutoff: usize) -> Result<WaveFunction> {
    let values = TruncatedEvolution::new(f, cutoff)?.at(t);
    WaveFunction::new(f.grid().clone(), values)
}

/// Precomputed truncated spectrum of one torus function, reusable across times.
pub(crate) struct TruncatedEvolution {
    grid: Arc<Grid1D>,
    /// `(bin, k, f̂(k))` for the retained modes.
    modes: Vec<(usize, i64, Complex64)>,
}

impl TruncatedEvolution {
    pub(crate) fn new(f: &WaveFunction, cutoff: usize) -> Result<Self> {
        let grid = f.grid().clone();
        check_cutoff(&grid, cutoff)?;
        let coeffs = analyze(&grid, f.values())?;
        Ok(Self::from_coefficients(grid, &coeffs, cutoff))
    }

    pub(crate) fn from_coefficients(grid: Arc<Grid1D>, coeffs: &[Complex64], cutoff: usize) -> Self {
        let n = cutoff as i64;
        let modes = (-n..=n)
            .filter_map(|k| grid.bin_of(k).map(|b| (b, k, coeffs[b])))
            .filter(|(_, _, c)| *c != Complex64::new(0.0, 0.0))
            .collect();
        Self { grid, modes }
    }

    pub(crate) fn at(&self, t: f64) -> Vec<Complex64> {
        let n = self.grid.len();
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        let scale = n as f64 / (2.0 * PI);
        for &(bin, k, c) in &self.modes {
            buf[bin] = c * Complex64::from_polar(scale, t * boussinesq_symbol(k as f64));
        }
        fft::inverse(&mut buf);
        buf
    }
}

/// Rebuilds a periodic function after multiplying its spectrum by `m(ξ)`.
pub(crate) fn apply_multiplier(f: &WaveFunction, m: impl Fn(f64) -> Complex64) -> Result<WaveFunction> {
    let grid = f.grid().clone();
    let xi = grid.frequencies()?;
    let mut coeffs = analyze(&grid, f.values())?;
    for (c, &k) in coeffs.iter_mut().zip(&xi) {
        *c *= m(k);
    }
    let values = synthesize(&grid, &coeffs)?;
    Ok(WaveFunction::from_parts(grid, values, None))
}
