use std::f64::consts::PI;
use std::ops::RangeInclusive;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use super::draws::{BlockDraws, Distribution};
use crate::error::{LabError, Result};
use crate::oscillatory::BumpFunction;
use crate::spectral::{apply_multiplier, Geometry, Grid1D, WaveFunction};

fn require(grid: &Grid1D, want: &'static str, op: &'static str) -> Result<()> {
    if grid.geometry().name() != want {
        return Err(LabError::UnsupportedGeometry { op, geometry: grid.geometry().name() });
    }
    Ok(())
}

/// Indices of the unit windows `ψ(ξ − k)` that meet the grid's frequencies.
pub fn wiener_blocks(grid: &Grid1D) -> Result<RangeInclusive<i64>> {
    require(grid, "line", "wiener_blocks")?;
    let xi = grid.frequencies()?;
    let lo = xi.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = xi.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(lo.floor() as i64..=hi.ceil() as i64)
}

/// `Σ_k g_k ψ(ξ − k)` at one frequency; only the two windows around `ξ` contribute.
fn wiener_multiplier(draws: &BlockDraws, xi: f64) -> f64 {
    let k = xi.floor() as i64;
    draws.get(k) * BumpFunction::Flat.shift(k, xi) + draws.get(k + 1) * BumpFunction::Flat.shift(k + 1, xi)
}

/// `Σ_k g_k ψ(D − k) f` for given draws.
pub fn apply_wiener(f: &WaveFunction, draws: &BlockDraws) -> Result<WaveFunction> {
    require(f.grid(), "line", "wiener_randomize_line")?;
    apply_multiplier(f, |xi| Complex64::new(wiener_multiplier(draws, xi), 0.0))
}

/// The single block `ψ(D − k) f`.
pub fn wiener_block(f: &WaveFunction, k: i64) -> Result<WaveFunction> {
    require(f.grid(), "line", "wiener_block")?;
    apply_multiplier(f, |xi| Complex64::new(BumpFunction::Flat.shift(k, xi), 0.0))
}

/// Wiener randomization on the line: an independent multiplier per unit frequency window.
pub fn wiener_randomize_line<R: Rng + ?Sized>(
    f: &WaveFunction,
    dist: Distribution,
    rng: &mut R,
) -> Result<WaveFunction> {
    let draws = BlockDraws::sample(wiener_blocks(f.grid())?, dist, rng);
    apply_wiener(f, &draws)
}

/// Fourier modes `−n/2 ≤ k ≤ n/2` of a torus grid.
pub fn torus_blocks(grid: &Grid1D) -> Result<RangeInclusive<i64>> {
    require(grid, "torus", "torus_blocks")?;
    let h = (grid.len() / 2) as i64;
    Ok(-h..=h)
}

pub fn apply_fourier(f: &WaveFunction, draws: &BlockDraws) -> Result<WaveFunction> {
    require(f.grid(), "torus", "fourier_randomize_torus")?;
    apply_multiplier(f, |xi| Complex64::new(draws.get(xi.round() as i64), 0.0))
}

/// Torus randomization: an independent multiplier per Fourier mode.
pub fn fourier_randomize_torus<R: Rng + ?Sized>(
    f: &WaveFunction,
    dist: Distribution,
    rng: &mut R,
) -> Result<WaveFunction> {
    let draws = BlockDraws::sample(torus_blocks(f.grid())?, dist, rng);
    apply_fourier(f, &draws)
}

/// `Σ_m g_m c_m/(mπ) e_m`; the `1/(mπ)` damping is part of the ball randomization.
pub fn apply_ball(grid: &Arc<Grid1D>, coeffs: &[Complex64], draws: &BlockDraws) -> Result<WaveFunction> {
    require(grid, "ball", "ball_randomize")?;
    if coeffs.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
        return Err(LabError::NonFinite("ball coefficients"));
    }
    let out = coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let m = (i + 1) as i64;
            c * (draws.get(m) / (m as f64 * PI))
        })
        .collect();
    WaveFunction::ball_from_coeffs(grid.clone(), out)
}

pub fn ball_randomize<R: Rng + ?Sized>(
    grid: &Arc<Grid1D>,
    coeffs: &[Complex64],
    dist: Distribution,
    rng: &mut R,
) -> Result<WaveFunction> {
    let draws = BlockDraws::sample(1..=coeffs.len().max(1) as i64, dist, rng);
    apply_ball(grid, coeffs, &draws)
}

/// Block range a geometry's randomizer draws over.
pub fn blocks_for(grid: &Grid1D, ball_modes: usize) -> Result<RangeInclusive<i64>> {
    match grid.geometry() {
        Geometry::Line { .. } => wiener_blocks(grid),
        Geometry::Torus => torus_blocks(grid),
        Geometry::BallRadial => Ok(1..=ball_modes.max(1) as i64),
    }
}

/// Randomizes `f` with the geometry's procedure and externally supplied draws.
pub fn randomize_with(f: &WaveFunction, draws: &BlockDraws) -> Result<WaveFunction> {
    match f.grid().geometry() {
        Geometry::Line { .. } => apply_wiener(f, draws),
        Geometry::Torus => apply_fourier(f, draws),
        Geometry::BallRadial => {
            let coeffs = f.coeffs().ok_or(LabError::MissingBallCoefficients)?;
            apply_ball(f.grid(), coeffs, draws)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randomization::draws::substream;
    use crate::spectral::ball_eigenfunction;

    fn line() -> Arc<Grid1D> {
        Arc::new(Grid1D::line(16.0 * PI, 256).unwrap())
    }

    fn bump_packet(grid: &Arc<Grid1D>) -> WaveFunction {
        WaveFunction::from_fn(grid.clone(), |x| Complex64::from_polar((-x * x / 8.0).exp(), 1.3 * x)).unwrap()
    }

    #[test]
    fn zero_in_zero_out() {
        let g = line();
        let z = wiener_randomize_line(&WaveFunction::zeros(g), Distribution::Gaussian, &mut substream(1, 0)).unwrap();
        assert!(z.values().iter().all(|v| v.norm() < 1e-15));
        let t = Arc::new(Grid1D::torus(32).unwrap());
        let z = fourier_randomize_torus(&WaveFunction::zeros(t), Distribution::Gaussian, &mut substream(1, 0)).unwrap();
        assert!(z.values().iter().all(|v| v.norm() < 1e-15));
        let b = Arc::new(Grid1D::ball_radial(64).unwrap());
        let z =
            ball_randomize(&b, &[Complex64::new(0.0, 0.0); 4], Distribution::Gaussian, &mut substream(1, 0)).unwrap();
        assert!(z.values().iter().all(|v| v.norm() < 1e-15));
    }

    #[test]
    fn single_block_is_scaled() {
        // ξ = 2 on a box of period 16π is the plane wave with wavenumber 16; ψ(0) = 1
        let g = line();
        let f = WaveFunction::plane_wave(g.clone(), 16).unwrap();
        let draws = BlockDraws::sample(wiener_blocks(&g).unwrap(), Distribution::Gaussian, &mut substream(3, 0));
        let out = apply_wiener(&f, &draws).unwrap();
        for (a, b) in out.values().iter().zip(f.values()) {
            assert!((a - b * draws.get(2)).norm() < 1e-12);
        }

        let t = Arc::new(Grid1D::torus(32).unwrap());
        let f = WaveFunction::plane_wave(t.clone(), -5).unwrap();
        let draws = BlockDraws::sample(torus_blocks(&t).unwrap(), Distribution::Gaussian, &mut substream(3, 0));
        let out = apply_fourier(&f, &draws).unwrap();
        for (a, b) in out.values().iter().zip(f.values()) {
            assert!((a - b * draws.get(-5)).norm() < 1e-12);
        }

        let b = Arc::new(Grid1D::ball_radial(64).unwrap());
        let mut c = vec![Complex64::new(0.0, 0.0); 5];
        c[2] = Complex64::new(2.0, 0.0);
        let draws = BlockDraws::from_values(1, vec![0.5, -1.0, 0.7, 2.0, 1.0]);
        let out = apply_ball(&b, &c, &draws).unwrap();
        for (v, &r) in out.values().iter().zip(b.points()) {
            let want = 0.7 * 2.0 / (3.0 * PI) * ball_eigenfunction(3, r);
            assert!((v.re - want).abs() < 1e-12 && v.im.abs() < 1e-15);
        }
    }

    #[test]
    fn linearity_with_shared_draws() {
        let g = line();
        let f = bump_packet(&g);
        let h = WaveFunction::from_fn(g.clone(), |x| Complex64::new((-(x - 2.0).powi(2)).exp(), 0.0)).unwrap();
        let (a, b) = (Complex64::new(0.3, -1.0), Complex64::new(2.0, 0.5));
        let combo = f.scaled(a).axpy(b, &h).unwrap();
        let r = |u: &WaveFunction| wiener_randomize_line(u, Distribution::Gaussian, &mut substream(9, 0)).unwrap();
        let lhs = r(&combo);
        let rhs = r(&f).scaled(a).axpy(b, &r(&h)).unwrap();
        for (x, y) in lhs.values().iter().zip(rhs.values()) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn wiener_pointwise_variance() {
        let g = line();
        let f = bump_packet(&g);
        let i0 = g.len() / 2 + 3;
        let blocks = wiener_blocks(&g).unwrap();
        let oracle: f64 = blocks.clone().map(|k| wiener_block(&f, k).unwrap().values()[i0].norm_sqr()).sum();
        let n = 10_000;
        let second_moment: f64 = (0..n)
            .map(|i| {
                let out = wiener_randomize_line(&f, Distribution::Gaussian, &mut substream(21, i)).unwrap();
                out.values()[i0].norm_sqr()
            })
            .sum::<f64>()
            / n as f64;
        assert!((second_moment / oracle - 1.0).abs() < 0.05, "{second_moment} vs {oracle}");
    }

    #[test]
    fn torus_and_ball_mean_square_norm() {
        let t = Arc::new(Grid1D::torus(32).unwrap());
        let f = WaveFunction::from_fn(t.clone(), |x| Complex64::new(x.cos() + 0.5 * (3.0 * x).sin(), 0.2)).unwrap();
        let n = 4000;
        let mean: f64 = (0..n)
            .map(|i| {
                fourier_randomize_torus(&f, Distribution::Gaussian, &mut substream(5, i)).unwrap().l2_norm().powi(2)
            })
            .sum::<f64>()
            / n as f64;
        assert!((mean / f.l2_norm().powi(2) - 1.0).abs() < 0.05);

        let b = Arc::new(Grid1D::ball_radial(128).unwrap());
        let c: Vec<Complex64> = (1..=6).map(|m| Complex64::new(1.0 / m as f64, 0.3)).collect();
        let oracle: f64 = c.iter().enumerate().map(|(i, c)| c.norm_sqr() / ((i + 1) as f64 * PI).powi(2)).sum();
        let mean: f64 = (0..n)
            .map(|i| ball_randomize(&b, &c, Distribution::Gaussian, &mut substream(6, i)).unwrap().l2_norm().powi(2))
            .sum::<f64>()
            / n as f64;
        assert!((mean / oracle - 1.0).abs() < 0.05, "{mean} vs {oracle}");
    }

    #[test]
    fn geometry_checks() {
        let t = Arc::new(Grid1D::torus(16).unwrap());
        let f = WaveFunction::plane_wave(t, 1).unwrap();
        assert!(wiener_randomize_line(&f, Distribution::Gaussian, &mut substream(0, 0)).is_err());
    }
}
