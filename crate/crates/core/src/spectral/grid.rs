use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

/// Default period of the periodic box standing in for the real line.
pub const DEFAULT_LINE_PERIOD: f64 = 64.0 * PI;
/// Default number of samples on the line box.
pub const DEFAULT_LINE_POINTS: usize = 4096;

/// The three geometries the propagator is realized on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Geometry {
    /// Periodic box `[-L/2, L/2)` approximating the real line.
    Line { period: f64 },
    /// The torus `[0, 2π)`.
    Torus,
    /// Radial sector `r ∈ (0, 1)` of the unit ball in three dimensions.
    BallRadial,
}

impl Geometry {
    pub fn name(&self) -> &'static str {
        match self {
            Geometry::Line { .. } => "line",
            Geometry::Torus => "torus",
            Geometry::BallRadial => "ball",
        }
    }
}

/// A uniform sample lattice with quadrature weights.
///
/// Line and torus grids are uniform with FFT size `n`. The ball grid samples
/// radii at cell midpoints `r_i = (i + 1/2)/n` and carries the radial measure
/// `4π r_i² Δr` as its per-point weight.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    geometry: Geometry,
    points: Vec<f64>,
    spacing: f64,
    weights: Vec<f64>,
}

impl Grid1D {
    pub fn line(period: f64, n: usize) -> Result<Self> {
        if !(period.is_finite() && period > 0.0) {
            return Err(LabError::InvalidGrid(format!("line period must be positive, got {period}")));
        }
        Self::check_n(n)?;
        let dx = period / n as f64;
        let points = (0..n).map(|i| -0.5 * period + i as f64 * dx).collect();
        Ok(Self { geometry: Geometry::Line { period }, points, spacing: dx, weights: vec![dx; n] })
    }

    /// The default line box: period 64π with 4096 points.
    pub fn default_line() -> Self {
        Self::line(DEFAULT_LINE_PERIOD, DEFAULT_LINE_POINTS).expect("default grid is valid")
    }

    pub fn torus(n: usize) -> Result<Self> {
        Self::check_n(n)?;
        let dx = 2.0 * PI / n as f64;
        let points = (0..n).map(|i| i as f64 * dx).collect();
        Ok(Self { geometry: Geometry::Torus, points, spacing: dx, weights: vec![dx; n] })
    }

    pub fn ball_radial(n: usize) -> Result<Self> {
        Self::check_n(n)?;
        let dr = 1.0 / n as f64;
        let points: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) * dr).collect();
        let weights = points.iter().map(|r| 4.0 * PI * r * r * dr).collect();
        Ok(Self { geometry: Geometry::BallRadial, points, spacing: dr, weights })
    }

    fn check_n(n: usize) -> Result<()> {
        if n < 2 {
            return Err(LabError::InvalidGrid(format!("need at least 2 points, got {n}")));
        }
        Ok(())
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Uniform spacing `Δx` (or `Δr` on the ball).
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Cell measures used for quadrature and norms.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Total measure of the domain as seen by the quadrature.
    pub fn measure(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Period of a periodic grid; `None` on the ball.
    pub fn period(&self) -> Option<f64> {
        match self.geometry {
            Geometry::Line { period } => Some(period),
            Geometry::Torus => Some(2.0 * PI),
            Geometry::BallRadial => None,
        }
    }

    /// Integer wavenumber of DFT bin `i` (bins above `n/2` wrap to negative).
    pub fn wavenumber(&self, i: usize) -> i64 {
        let n = self.len();
        if i <= n / 2 {
            i as i64
        } else {
            i as i64 - n as i64
        }
    }

    /// DFT bin holding integer wavenumber `k`, if representable.
    pub fn bin_of(&self, k: i64) -> Option<usize> {
        let n = self.len() as i64;
        let i = k.rem_euclid(n) as usize;
        (self.wavenumber(i) == k).then_some(i)
    }

    /// Angular frequencies `ξ_k = 2πk/L` in DFT order.
    pub fn frequencies(&self) -> Result<Vec<f64>> {
        let period = self.period().ok_or(LabError::UnsupportedGeometry { op: "frequencies", geometry: "ball" })?;
        let base = 2.0 * PI / period;
        Ok((0..self.len()).map(|i| base * self.wavenumber(i) as f64).collect())
    }

    pub(crate) fn origin(&self) -> f64 {
        self.points[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_are_increasing_with_positive_cells() {
        for g in [Grid1D::line(10.0, 16).unwrap(), Grid1D::torus(16).unwrap(), Grid1D::ball_radial(16).unwrap()] {
            assert!(g.points().windows(2).all(|w| w[1] > w[0]));
            assert!(g.weights().iter().all(|&w| w > 0.0));
            assert!(g.spacing() > 0.0);
        }
    }

    #[test]
    fn rejects_tiny_grids() {
        assert!(Grid1D::torus(1).is_err());
        assert!(Grid1D::line(-1.0, 8).is_err());
    }

    #[test]
    fn torus_frequencies_are_integers() {
        let g = Grid1D::torus(8).unwrap();
        let f = g.frequencies().unwrap();
        assert_eq!(f, vec![0.0, 1.0, 2.0, 3.0, 4.0, -3.0, -2.0, -1.0]);
        assert_eq!(g.bin_of(-3), Some(5));
        assert_eq!(g.bin_of(5), None);
    }

    #[test]
    fn ball_measure_approximates_volume() {
        let g = Grid1D::ball_radial(2000).unwrap();
        assert!((g.measure() - 4.0 * PI / 3.0).abs() < 1e-5);
    }

    #[test]
    fn default_line_box() {
        let g = Grid1D::default_line();
        assert_eq!(g.len(), 4096);
        assert!((g.frequencies().unwrap()[1] - 1.0 / 32.0).abs() < 1e-15);
    }
}
