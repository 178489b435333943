use std::sync::Arc;

use num_complex::Complex64;

use super::grid::{Geometry, Grid1D};
use super::propagator::apply_multiplier;
use super::wave::{analyze, InnerProduct, WaveFunction};
use super::{ORTHONORMALITY_TOL, PIVOT_THRESHOLD};
use crate::error::{LabError, Result};

/// A family of functions orthonormal under a declared inner product.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthonormalSystem {
    functions: Vec<WaveFunction>,
    inner_product: InnerProduct,
}

impl OrthonormalSystem {
    /// Checks the Gram matrix against the identity before accepting the family.
    pub fn new(functions: Vec<WaveFunction>, inner_product: InnerProduct) -> Result<Self> {
        let sys = Self { functions, inner_product };
        let dev = sys.gram_deviation()?;
        if dev > ORTHONORMALITY_TOL {
            return Err(LabError::Degenerate(format!("family is not orthonormal: max |G - I| = {dev:e}")));
        }
        Ok(sys)
    }

    pub fn empty(inner_product: InnerProduct) -> Self {
        Self { functions: Vec::new(), inner_product }
    }

    pub fn functions(&self) -> &[WaveFunction] {
        &self.functions
    }

    pub fn inner_product(&self) -> InnerProduct {
        self.inner_product
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn grid(&self) -> Option<&Arc<Grid1D>> {
        self.functions.first().map(|f| f.grid())
    }

    /// `max_{j,k} |⟨f_j, f_k⟩ - δ_jk|`.
    pub fn gram_deviation(&self) -> Result<f64> {
        let mut worst = 0.0f64;
        for (j, f) in self.functions.iter().enumerate() {
            for (k, g) in self.functions.iter().enumerate().skip(j) {
                let ip = f.inner(g, self.inner_product)?;
                let target = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((ip - target).norm());
            }
        }
        Ok(worst)
    }
}

/// Coordinates in which the chosen inner product is the Euclidean one.
enum Coordinates {
    /// Scaled Fourier coefficients `√L |ξ|^s f̂`; `s = 0` for L².
    Fourier { scale: Vec<f64> },
    /// Ball eigenbasis coefficients.
    Ball { modes: usize },
    /// Point values weighted by `√w_i`.
    Weighted,
}

/// Modified Gram–Schmidt with one reorthogonalization pass.
///
/// A function whose residual norm falls below `1e-10` times its own norm is
/// reported as rank-deficient by index.
pub fn gram_orthonormalize(raw: &[WaveFunction], inner_product: InnerProduct) -> Result<OrthonormalSystem> {
    let Some(first) = raw.first() else {
        return Ok(OrthonormalSystem::empty(inner_product));
    };
    let grid = first.grid().clone();
    for f in raw {
        f.check_same_grid(first)?;
    }

    let coords = match (grid.geometry(), inner_product) {
        (Geometry::BallRadial, InnerProduct::HomSobolev { .. }) => {
            return Err(LabError::UnsupportedGeometry { op: "homogeneous Sobolev inner product", geometry: "ball" })
        }
        (Geometry::BallRadial, InnerProduct::L2) if raw.iter().all(|f| f.coeffs().is_some()) => {
            Coordinates::Ball { modes: raw.iter().map(|f| f.coeffs().map_or(0, <[_]>::len)).max().unwrap_or(0) }
        }
        (Geometry::BallRadial, InnerProduct::L2) => Coordinates::Weighted,
        (_, ip) => {
            let s = match ip {
                InnerProduct::L2 => 0.0,
                InnerProduct::HomSobolev { s } => s,
            };
            let root = grid.period().expect("periodic").sqrt();
            let scale = grid
                .frequencies()?
                .iter()
                .map(|&k| match ip {
                    InnerProduct::L2 => root,
                    InnerProduct::HomSobolev { .. } if k == 0.0 => 0.0,
                    InnerProduct::HomSobolev { .. } => root * k.abs().powf(s),
                })
                .collect();
            Coordinates::Fourier { scale }
        }
    };

    let zero = Complex64::new(0.0, 0.0);
    let mut vectors: Vec<Vec<Complex64>> = raw
        .iter()
        .map(|f| match &coords {
            Coordinates::Fourier { scale } => {
                let c = analyze(&grid, f.values())?;
                Ok(c.iter().zip(scale).map(|(v, s)| v * s).collect())
            }
            Coordinates::Ball { modes } => {
                let mut c = f.coeffs().unwrap_or(&[]).to_vec();
                c.resize(*modes, zero);
                Ok(c)
            }
            Coordinates::Weighted => Ok(f.values().iter().zip(grid.weights()).map(|(v, w)| v * w.sqrt()).collect()),
        })
        .collect::<Result<_>>()?;

    let dot = |a: &[Complex64], b: &[Complex64]| -> Complex64 { a.iter().zip(b).map(|(x, y)| x * y.conj()).sum() };

    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(vectors.len());
    for (index, v) in vectors.iter_mut().enumerate() {
        let original = dot(v, v).re.sqrt();
        for _pass in 0..2 {
            for q in &basis {
                let c = dot(v, q);
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= c * y;
                }
            }
        }
        let residual = dot(v, v).re.sqrt();
        if original == 0.0 || residual <= PIVOT_THRESHOLD * original {
            return Err(LabError::RankDeficient { index, residual });
        }
        basis.push(v.iter().map(|x| x / residual).collect());
    }

    let functions = basis
        .into_iter()
        .map(|v| match &coords {
            Coordinates::Fourier { scale } => {
                let c: Vec<Complex64> =
                    v.iter().zip(scale).map(|(x, s)| if *s == 0.0 { zero } else { x / s }).collect();
                WaveFunction::from_fourier(grid.clone(), &c)
            }
            Coordinates::Ball { .. } => WaveFunction::ball_from_coeffs(grid.clone(), v),
            Coordinates::Weighted => {
                let vals = v.iter().zip(grid.weights()).map(|(x, w)| x / w.sqrt()).collect();
                WaveFunction::new(grid.clone(), vals)
            }
        })
        .collect::<Result<Vec<_>>>()?;

    OrthonormalSystem::new(functions, inner_product)
}

/// Maps an L²-normalized function to `D^{-s} g`, multiplying `ĝ(ξ)` by `|ξ|^{-s}`.
///
/// `D^{-s}` is an isometry from mean-zero L² onto `Ḣ^s`, so lifting an
/// L²-orthonormal family gives an `Ḣ^s`-orthonormal one.
pub fn homogeneous_sobolev_lift(g: &WaveFunction, s: f64) -> Result<WaveFunction> {
    let grid = g.grid();
    if grid.geometry() == Geometry::BallRadial {
        return Err(LabError::UnsupportedGeometry { op: "homogeneous_sobolev_lift", geometry: "ball" });
    }
    let coeffs = analyze(grid, g.values())?;
    let period = grid.period().expect("periodic");
    let zero_mode = coeffs[0].norm() * period.sqrt();
    let scale = g.l2_norm().max(f64::MIN_POSITIVE);
    if zero_mode > PIVOT_THRESHOLD * scale {
        return Err(LabError::ZeroFrequency(coeffs[0].norm()));
    }
    apply_multiplier(g, |k| if k == 0.0 { Complex64::new(0.0, 0.0) } else { Complex64::new(k.abs().powf(-s), 0.0) })
}

/// Lifts every member of an L²-orthonormal system into `Ḣ^s`.
pub fn lift_system(system: &OrthonormalSystem, s: f64) -> Result<OrthonormalSystem> {
    if system.inner_product() != InnerProduct::L2 {
        return Err(LabError::Degenerate("lift expects an L²-orthonormal system".into()));
    }
    let functions = system.functions().iter().map(|g| homogeneous_sobolev_lift(g, s)).collect::<Result<Vec<_>>>()?;
    OrthonormalSystem::new(functions, InnerProduct::HomSobolev { s })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    use super::*;

    fn torus(n: usize) -> Arc<Grid1D> {
        Arc::new(Grid1D::torus(n).unwrap())
    }

    #[test]
    fn fourier_modes_are_kept_up_to_phase() {
        let grid = torus(32);
        let raw: Vec<_> = (1..4)
            .map(|k| WaveFunction::plane_wave(grid.clone(), k).unwrap().scaled((1.0 / (2.0 * PI).sqrt()).into()))
            .collect();
        let sys = gram_orthonormalize(&raw, InnerProduct::L2).unwrap();
        for (a, b) in sys.functions().iter().zip(&raw) {
            let ip = a.inner(b, InnerProduct::L2).unwrap();
            assert!((ip.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn dependent_input_names_the_index() {
        let grid = torus(16);
        let f = WaveFunction::from_fn(grid, |x| Complex64::new(x.sin(), 0.0)).unwrap();
        let err = gram_orthonormalize(&[f.clone(), f.scaled(2.0.into())], InnerProduct::L2).unwrap_err();
        assert!(matches!(err, LabError::RankDeficient { index: 1, .. }), "{err}");
    }

    #[test]
    fn random_gaussian_family_becomes_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for grid in [torus(64), Arc::new(Grid1D::line(40.0, 64).unwrap()), Arc::new(Grid1D::ball_radial(64).unwrap())] {
            let raw: Vec<_> = (0..6)
                .map(|_| {
                    let vals = (0..64)
                        .map(|_| Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
                        .collect();
                    WaveFunction::new(grid.clone(), vals).unwrap()
                })
                .collect();
            let sys = gram_orthonormalize(&raw, InnerProduct::L2).unwrap();
            // direct Gram matrix via the grid quadrature
            for (j, f) in sys.functions().iter().enumerate() {
                for (k, g) in sys.functions().iter().enumerate() {
                    let ip: Complex64 =
                        f.values().iter().zip(g.values()).zip(grid.weights()).map(|((a, b), w)| a * b.conj() * w).sum();
                    let target = if j == k { 1.0 } else { 0.0 };
                    assert!((ip - target).norm() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn sobolev_orthonormalization() {
        let grid = torus(32);
        let raw: Vec<_> = [1i64, 2, -3]
            .iter()
            .map(|&k| {
                WaveFunction::plane_wave(grid.clone(), k)
                    .unwrap()
                    .axpy(0.3.into(), &WaveFunction::plane_wave(grid.clone(), 5).unwrap())
                    .unwrap()
            })
            .collect();
        let ip = InnerProduct::HomSobolev { s: 0.25 };
        let sys = gram_orthonormalize(&raw, ip).unwrap();
        assert!(sys.gram_deviation().unwrap() < 1e-10);
    }

    #[test]
    fn lift_of_unit_frequency_is_identity() {
        let g = WaveFunction::plane_wave(torus(16), 1).unwrap().scaled((1.0 / (2.0 * PI).sqrt()).into());
        let h = homogeneous_sobolev_lift(&g, 0.25).unwrap();
        for (a, b) in h.values().iter().zip(g.values()) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn lift_scales_second_mode() {
        let g = WaveFunction::plane_wave(torus(16), 2).unwrap().scaled((1.0 / (2.0 * PI).sqrt()).into());
        let h = homogeneous_sobolev_lift(&g, 0.5).unwrap();
        for (a, b) in h.values().iter().zip(g.values()) {
            assert!((a - b * 2f64.powf(-0.5)).norm() < 1e-13);
        }
        assert!((h.norm(InnerProduct::HomSobolev { s: 0.5 }).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_cannot_be_lifted() {
        let g = WaveFunction::from_fn(torus(16), |_| Complex64::new(0.4, 0.0)).unwrap();
        let err = homogeneous_sobolev_lift(&g, 0.3).unwrap_err();
        assert!(err.to_string().starts_with("zero frequency obstructs homogeneous lift"));
    }
}
