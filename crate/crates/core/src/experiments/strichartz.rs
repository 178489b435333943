use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution as _, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{exponent_violations, ExperimentConfig, Exponents, SystemRecipe};
use super::fit::ScalingFit;
use crate::error::{LabError, Result};
use crate::norms::{mixed_norm, sequence_norm, NormOrder, SpaceTimeField};
use crate::randomization::substream;
use crate::spectral::{Grid1D, TruncatedEvolution, WaveFunction};

/// A finite-rank operator on the torus restricted to modes `|k| ≤ N`.
///
/// Column `j` of `coeffs` holds the coordinates of `f_j` in the orthonormal
/// basis `e^{ikx}/√(2π)`, row `k + N`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusSystem {
    cutoff: usize,
    coeffs: DMatrix<Complex64>,
    lambda: Vec<f64>,
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

impl TorusSystem {
    pub fn new(cutoff: usize, coeffs: DMatrix<Complex64>, lambda: Vec<f64>) -> Result<Self> {
        if coeffs.nrows() != 2 * cutoff + 1 || coeffs.ncols() != lambda.len() {
            return Err(LabError::DimensionMismatch(format!(
                "{}x{} coefficients for cutoff {cutoff} and {} eigenvalues",
                coeffs.nrows(),
                coeffs.ncols(),
                lambda.len()
            )));
        }
        Ok(Self { cutoff, coeffs, lambda })
    }

    /// Gaussian coefficients on `|k| ≤ N`, orthonormalized by QR.
    pub fn random<R: Rng + ?Sized>(cutoff: usize, rank: usize, lambda: f64, rng: &mut R) -> Result<Self> {
        let modes = 2 * cutoff + 1;
        if rank == 0 || rank > modes {
            return Err(LabError::OutOfRange(format!("rank {rank} outside 1..={modes}")));
        }
        let raw = DMatrix::from_fn(modes, rank, |_, _| complex_gaussian(rng));
        let q = raw.qr().q();
        Self::new(cutoff, q, vec![lambda; rank])
    }

    /// `f_j = e^{ijx}`, `|j| ≤ N`, with `λ_j = 1/(2π)`.
    pub fn counterexample(cutoff: usize) -> Self {
        let modes = 2 * cutoff + 1;
        let coeffs = DMatrix::from_diagonal_element(modes, modes, Complex64::new((2.0 * PI).sqrt(), 0.0));
        Self { cutoff, coeffs, lambda: vec![1.0 / (2.0 * PI); modes] }
    }

    /// The single normalized mode `e^{ikx}/√(2π)`.
    pub fn single_mode(cutoff: usize, k: i64, lambda: f64) -> Result<Self> {
        if k.unsigned_abs() as usize > cutoff {
            return Err(LabError::OutOfRange(format!("mode {k} beyond cutoff {cutoff}")));
        }
        let mut coeffs = DMatrix::zeros(2 * cutoff + 1, 1);
        coeffs[((k + cutoff as i64) as usize, 0)] = Complex64::new(1.0, 0.0);
        Self::new(cutoff, coeffs, vec![lambda])
    }

    pub fn from_recipe<R: Rng + ?Sized>(recipe: SystemRecipe, cutoff: usize, lambda: f64, rng: &mut R) -> Result<Self> {
        match recipe {
            SystemRecipe::Random { .. } | SystemRecipe::RandomProportional { .. } => {
                Self::random(cutoff, recipe.rank(cutoff), lambda, rng)
            }
            SystemRecipe::Counterexample => Ok(Self::counterexample(cutoff)),
            SystemRecipe::SingleMode { k } => Self::single_mode(cutoff, k, lambda),
        }
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn rank(&self) -> usize {
        self.lambda.len()
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn coeffs(&self) -> &DMatrix<Complex64> {
        &self.coeffs
    }

    pub fn with_lambda(&self, lambda: Vec<f64>) -> Result<Self> {
        Self::new(self.cutoff, self.coeffs.clone(), lambda)
    }

    /// Fourier series coefficients of `f_j` in FFT bin order of `grid`.
    fn spectrum(&self, grid: &Grid1D, j: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); grid.len()];
        let norm = 1.0 / (2.0 * PI).sqrt();
        for k in -(self.cutoff as i64)..=self.cutoff as i64 {
            if let Some(b) = grid.bin_of(k) {
                out[b] = self.coeffs[((k + self.cutoff as i64) as usize, j)] * norm;
            }
        }
        out
    }

    /// The members `f_j` sampled on `grid`.
    pub fn functions(&self, grid: &Arc<Grid1D>) -> Result<Vec<WaveFunction>> {
        (0..self.rank()).map(|j| WaveFunction::from_fourier(grid.clone(), &self.spectrum(grid, j))).collect()
    }

    /// `Σ_j λ_j |𝒟_N f_j(t, x)|²` on `times × grid`.
    ///
    /// `inspect` sees every evolved function and its maximum over all calls
    /// is returned alongside the field.
    pub fn density_field_inspect(
        &self,
        grid: &Arc<Grid1D>,
        times: &[f64],
        dt: f64,
        inspect: impl Fn(&[Complex64]) -> f64 + Sync,
    ) -> Result<(SpaceTimeField, f64)> {
        if 2 * self.cutoff + 1 > grid.len() {
            return Err(LabError::BeyondNyquist { cutoff: self.cutoff, points: grid.len() });
        }
        let evolutions: Vec<TruncatedEvolution> = (0..self.rank())
            .map(|j| TruncatedEvolution::from_coefficients(grid.clone(), &self.spectrum(grid, j), self.cutoff))
            .collect();
        let rows: Vec<(Vec<f64>, f64)> = times
            .par_iter()
            .map(|&t| {
                let mut row = vec![0.0; grid.len()];
                let mut worst = 0.0f64;
                for (ev, &l) in evolutions.iter().zip(&self.lambda) {
                    let u = ev.at(t);
                    worst = worst.max(inspect(&u));
                    for (r, v) in row.iter_mut().zip(&u) {
                        *r += l * v.norm_sqr();
                    }
                }
                (row, worst)
            })
            .collect();
        let worst = rows.iter().fold(0.0f64, |m, (_, w)| m.max(*w));
        let field =
            SpaceTimeField::from_rows(times.to_vec(), dt, grid.clone(), rows.into_iter().map(|(r, _)| r).collect())?;
        Ok((field, worst))
    }

    pub fn density_field(&self, grid: &Arc<Grid1D>, times: &[f64], dt: f64) -> Result<SpaceTimeField> {
        Ok(self.density_field_inspect(grid, times, dt, |_| 0.0)?.0)
    }
}

/// `n` equispaced samples of `[0, 2π)` and their spacing.
pub fn torus_times(n: usize) -> (Vec<f64>, f64) {
    let dt = 2.0 * PI / n as f64;
    ((0..n).map(|i| i as f64 * dt).collect(), dt)
}

/// `‖Σ λ_j |𝒟_N f_j|²‖_{L^p_t L^q_x(𝕋×𝕋)}` for an explicit list of functions.
pub fn strichartz_lhs(
    functions: &[WaveFunction],
    lambda: &[f64],
    cutoff: usize,
    t_samples: usize,
    p: f64,
    q: f64,
) -> Result<f64> {
    let Some(first) = functions.first() else {
        return Ok(0.0);
    };
    let grid = first.grid().clone();
    let evolutions = functions.iter().map(|f| TruncatedEvolution::new(f, cutoff)).collect::<Result<Vec<_>>>()?;
    let (times, dt) = torus_times(t_samples);
    let rows: Vec<Vec<f64>> = times
        .par_iter()
        .map(|&t| {
            let mut row = vec![0.0; grid.len()];
            for (ev, &l) in evolutions.iter().zip(lambda) {
                for (r, v) in row.iter_mut().zip(ev.at(t)) {
                    *r += l * v.norm_sqr();
                }
            }
            row
        })
        .collect();
    mixed_norm(&SpaceTimeField::from_rows(times, dt, grid, rows)?, p, q, NormOrder::TimeOuter)
}

/// Measurements at one cutoff, extremal over the sampled systems.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrichartzPoint {
    pub n: usize,
    pub rank: usize,
    pub lhs_max: f64,
    pub lambda_norm: f64,
    /// Extremes of `LHS / (N^{1/p} ‖λ‖_{ℓ^β})` over the systems.
    pub ratio_max: f64,
    pub ratio_min: f64,
}

/// A Strichartz experiment at one exponent triple across the cutoffs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrichartzScan {
    pub exponents: Exponents,
    pub points: Vec<StrichartzPoint>,
    /// Largest LHS against `N`, claimed exponent `1/p`.
    pub lhs_fit: ScalingFit,
    /// Largest normalized ratio against `N`; the claimed exponent is the one
    /// predicted if the LHS grows like the rank: `1 − 1/p − 1/β` for
    /// rank-growing recipes, `−1/p` for fixed rank.
    pub ratio_fit: ScalingFit,
}

impl StrichartzScan {
    /// Largest over smallest `ratio_max` across cutoffs.
    pub fn ratio_spread(&self) -> f64 {
        self.ratio_fit.spread()
    }
}

fn check_triples(cfg: &ExperimentConfig, triples: &[Exponents]) -> Result<Vec<usize>> {
    let cutoffs = cfg.cutoffs()?;
    for e in triples {
        let v = exponent_violations(e, cfg.mode);
        if !v.is_empty() {
            return Err(LabError::Inadmissible(v.join("; ")));
        }
    }
    Ok(cutoffs)
}

/// Runs the configured systems once per cutoff and evaluates every exponent triple on the same density fields.
type LhsAndNorm = (f64, f64);

pub fn strichartz_scan_multi(cfg: &ExperimentConfig, triples: &[Exponents]) -> Result<Vec<StrichartzScan>> {
    let cutoffs = check_triples(cfg, triples)?;
    let systems_per_n = match cfg.recipe {
        SystemRecipe::Random { .. } | SystemRecipe::RandomProportional { .. } => cfg.systems_per_n,
        _ => 1,
    };
    let (times, dt) = torus_times(cfg.t_samples);
    // per cutoff, per system: (lhs, λ-norm) per triple
    let mut measured: Vec<(usize, usize, Vec<Vec<LhsAndNorm>>)> = Vec::new();
    for &n in &cutoffs {
        let grid = Arc::new(Grid1D::torus(cfg.x_points(n))?);
        let mut per_system = Vec::with_capacity(systems_per_n);
        for s in 0..systems_per_n {
            let mut rng = substream(cfg.seeds.omega, ((n as u64) << 20) | s as u64);
            let sys = TorusSystem::from_recipe(cfg.recipe, n, cfg.lambda, &mut rng)?;
            let field = sys.density_field(&grid, &times, dt)?;
            let vals = triples
                .iter()
                .map(|e| {
                    Ok((mixed_norm(&field, e.p, e.q, NormOrder::TimeOuter)?, sequence_norm(sys.lambda(), e.beta)?))
                })
                .collect::<Result<Vec<_>>>()?;
            per_system.push(vals);
        }
        measured.push((n, cfg.recipe.rank(n), per_system));
    }

    let rank_grows = matches!(cfg.recipe, SystemRecipe::Counterexample | SystemRecipe::RandomProportional { .. });
    triples
        .iter()
        .enumerate()
        .map(|(ti, e)| {
            let points: Vec<StrichartzPoint> = measured
                .iter()
                .map(|(n, rank, per_system)| {
                    let scale = (*n as f64).powf(1.0 / e.p);
                    let lhs_max = per_system.iter().map(|v| v[ti].0).fold(0.0, f64::max);
                    let lambda_norm = per_system[0][ti].1;
                    let ratios: Vec<f64> = per_system.iter().map(|v| v[ti].0 / (scale * v[ti].1)).collect();
                    StrichartzPoint {
                        n: *n,
                        rank: *rank,
                        lhs_max,
                        lambda_norm,
                        ratio_max: ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
                        ratio_min: ratios.iter().cloned().fold(f64::INFINITY, f64::min),
                    }
                })
                .collect();
            let ns: Vec<f64> = points.iter().map(|p| p.n as f64).collect();
            let lhs_fit = ScalingFit::new(ns.clone(), points.iter().map(|p| p.lhs_max).collect(), 1.0 / e.p)?;
            let claimed = if rank_grows { 1.0 - 1.0 / e.p - 1.0 / e.beta } else { -1.0 / e.p };
            let ratio_fit = ScalingFit::new(ns, points.iter().map(|p| p.ratio_max).collect(), claimed)?;
            Ok(StrichartzScan { exponents: *e, points, lhs_fit, ratio_fit })
        })
        .collect()
}

pub fn strichartz_scan(cfg: &ExperimentConfig) -> Result<StrichartzScan> {
    Ok(strichartz_scan_multi(cfg, &[cfg.exponents()])?.remove(0))
}

/// Fit of the largest `‖Σλ_j|𝒟_N f_j|²‖_{L^p_t L^q_x}` against `N`, claimed exponent `1/p`.
pub fn strichartz_scaling_torus(cfg: &ExperimentConfig) -> Result<ScalingFit> {
    Ok(strichartz_scan(cfg)?.lhs_fit)
}

/// The `L²_t L^∞_x` case, whose bound carries `N^{1/2}` and needs `β ≤ 2` in bound mode.
pub fn maximal_space_scaling(cfg: &ExperimentConfig) -> Result<ScalingFit> {
    if !(cfg.q.is_infinite() && cfg.p == 2.0) {
        return Err(LabError::Inadmissible(format!(
            "maximal space scaling uses p = 2, q = ∞; got p = {}, q = {}",
            cfg.p, cfg.q
        )));
    }
    strichartz_scaling_torus(cfg)
}

/// One evaluation of the plane-wave counterexample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleRecord {
    pub n: usize,
    pub lhs: f64,
    /// `N^{1/p} ‖λ‖_{ℓ^β}`
    pub rhs: f64,
    pub ratio: f64,
}

/// The counterexample across cutoffs at several `β`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleSweep {
    pub p: f64,
    pub q: f64,
    pub betas: Vec<f64>,
    /// `records[b][i]`: `β = betas[b]`, cutoff `i`.
    pub records: Vec<Vec<CounterexampleRecord>>,
    /// LHS against `N`, claimed exponent 1.
    pub lhs_fit: ScalingFit,
    /// Per `β`: `LHS/RHS` against `N`, claimed exponent `1 − 1/p − 1/β`.
    pub ratio_fits: Vec<ScalingFit>,
    /// `max | |𝒟_N f_j| − 1/(2π) |` over all modes, times and points.
    pub modulus_deviation: f64,
}

/// `LHS = ‖Σ λ_j |𝒟_N e^{ijx}|²‖_{L^p_t L^q_x}` for the plane waves, against `N^{1/p} ‖λ‖_{ℓ^β}`.
pub fn counterexample_sweep(
    n_list: &[usize],
    p: f64,
    q: f64,
    betas: &[f64],
    t_samples: usize,
    x_points_per_mode: usize,
) -> Result<CounterexampleSweep> {
    if n_list.contains(&0) {
        return Err(LabError::OutOfRange("N must be ≥ 1".into()));
    }
    let (times, dt) = torus_times(t_samples.max(1));
    let target = 1.0 / (2.0 * PI);
    let mut lhs = Vec::new();
    let mut lambda_norms = Vec::new();
    let mut modulus_deviation = 0.0f64;
    for &n in n_list {
        let grid = Arc::new(Grid1D::torus((x_points_per_mode.max(3) * n).max(8).next_power_of_two())?);
        let sys = TorusSystem::counterexample(n);
        let (field, dev) = sys.density_field_inspect(&grid, &times, dt, |u| {
            u.iter().map(|v| (v.norm() - target).abs()).fold(0.0, f64::max)
        })?;
        modulus_deviation = modulus_deviation.max(dev);
        lhs.push(mixed_norm(&field, p, q, NormOrder::TimeOuter)?);
        lambda_norms.push(betas.iter().map(|&b| sequence_norm(sys.lambda(), b)).collect::<Result<Vec<_>>>()?);
    }
    let ns: Vec<f64> = n_list.iter().map(|&n| n as f64).collect();
    let records: Vec<Vec<CounterexampleRecord>> = betas
        .iter()
        .enumerate()
        .map(|(b, _)| {
            n_list
                .iter()
                .enumerate()
                .map(|(i, &n)| {
                    let rhs = (n as f64).powf(1.0 / p) * lambda_norms[i][b];
                    CounterexampleRecord { n, lhs: lhs[i], rhs, ratio: lhs[i] / rhs }
                })
                .collect()
        })
        .collect();
    let lhs_fit = ScalingFit::new(ns.clone(), lhs.clone(), 1.0)?;
    let ratio_fits = betas
        .iter()
        .zip(&records)
        .map(|(&b, recs)| ScalingFit::new(ns.clone(), recs.iter().map(|r| r.ratio).collect(), 1.0 - 1.0 / p - 1.0 / b))
        .collect::<Result<Vec<_>>>()?;
    Ok(CounterexampleSweep { p, q, betas: betas.to_vec(), records, lhs_fit, ratio_fits, modulus_deviation })
}

/// A single cutoff of [`counterexample_sweep`].
pub fn optimality_counterexample(
    n: usize,
    p: f64,
    q: f64,
    beta: f64,
    t_samples: usize,
) -> Result<CounterexampleRecord> {
    if n == 0 {
        return Err(LabError::OutOfRange("N must be ≥ 1".into()));
    }
    let grid = Arc::new(Grid1D::torus((4 * n).max(8).next_power_of_two())?);
    let (times, dt) = torus_times(t_samples.max(1));
    let sys = TorusSystem::counterexample(n);
    let lhs = mixed_norm(&sys.density_field(&grid, &times, dt)?, p, q, NormOrder::TimeOuter)?;
    let rhs = (n as f64).powf(1.0 / p) * sequence_norm(sys.lambda(), beta)?;
    Ok(CounterexampleRecord { n, lhs, rhs, ratio: lhs / rhs })
}
