use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution as _, StandardNormal};

use crate::error::{LabError, Result};
use crate::spectral::{gram_orthonormalize, Geometry, Grid1D, InnerProduct, OrthonormalSystem, WaveFunction};

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

/// Random L²-orthonormal system with spectrum in `lo ≤ |ξ| ≤ hi` on a line or torus grid.
///
/// Gaussian Fourier coefficients on the band, then Gram–Schmidt.
pub fn band_limited_system<R: Rng + ?Sized>(
    grid: &Arc<Grid1D>,
    lo: f64,
    hi: f64,
    rank: usize,
    rng: &mut R,
) -> Result<OrthonormalSystem> {
    if grid.geometry() == Geometry::BallRadial {
        return Err(LabError::UnsupportedGeometry { op: "band_limited_system", geometry: "ball" });
    }
    let freqs = grid.frequencies()?;
    let bins: Vec<usize> = (0..grid.len()).filter(|&b| (lo..=hi).contains(&freqs[b].abs())).collect();
    if rank > bins.len() {
        return Err(LabError::OutOfRange(format!("rank {rank} exceeds the {} frequencies in the band", bins.len())));
    }
    let raw = (0..rank)
        .map(|_| {
            let mut c = vec![Complex64::new(0.0, 0.0); grid.len()];
            for &b in &bins {
                c[b] = complex_gaussian(rng);
            }
            WaveFunction::from_fourier(grid.clone(), &c)
        })
        .collect::<Result<Vec<_>>>()?;
    gram_orthonormalize(&raw, InnerProduct::L2)
}

/// Random L²-orthonormal system on the ball spanned by the radial modes `1..=modes`.
pub fn ball_system<R: Rng + ?Sized>(
    grid: &Arc<Grid1D>,
    modes: usize,
    rank: usize,
    rng: &mut R,
) -> Result<OrthonormalSystem> {
    if grid.geometry() != Geometry::BallRadial {
        return Err(LabError::UnsupportedGeometry { op: "ball_system", geometry: grid.geometry().name() });
    }
    if rank > modes {
        return Err(LabError::OutOfRange(format!("rank {rank} exceeds {modes} radial modes")));
    }
    let raw = (0..rank)
        .map(|_| WaveFunction::ball_from_coeffs(grid.clone(), (0..modes).map(|_| complex_gaussian(rng)).collect()))
        .collect::<Result<Vec<_>>>()?;
    gram_orthonormalize(&raw, InnerProduct::L2)
}
