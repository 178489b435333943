use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution as _, StandardNormal};
use serde::{Deserialize, Serialize};

use super::config::Exponents;
use super::strichartz::{torus_times, TorusSystem};
use crate::error::{LabError, Result};
use crate::norms::{
    conjugate, kernel_l2_norm, mixed_norm, norming_field, schatten_norm, sequence_norm, NormOrder, SpaceTimeField,
};
use crate::randomization::substream;
use crate::spectral::{
    boussinesq_symbol, operator_kernel, CompactOperatorRep, Grid1D, InnerProduct, OrthonormalSystem,
};

/// Largest `(space-time points) × (modes)` for which the matrix of `𝒟_N` is built.
pub const DUALITY_BUDGET: usize = 1 << 22;

/// `𝒟_N` on `|k| ≤ N` as a matrix from mode coordinates to space-time samples.
///
/// Row `i·n_x + j` is the sample `(t_i, x_j)`; column `k + N` maps the
/// normalized mode `e^{ikx}/√(2π)` to `(2π)^{-3/2} e^{i(kx + tφ(k))}`.
#[derive(Debug, Clone)]
pub struct DualityProblem {
    cutoff: usize,
    grid: Arc<Grid1D>,
    times: Vec<f64>,
    dt: f64,
    a: DMatrix<Complex64>,
}

impl DualityProblem {
    pub fn new(n_x: usize, t_samples: usize, cutoff: usize) -> Result<Self> {
        if 2 * cutoff + 1 > n_x {
            return Err(LabError::BeyondNyquist { cutoff, points: n_x });
        }
        let modes = 2 * cutoff + 1;
        let rows = n_x * t_samples;
        if rows.saturating_mul(modes) > DUALITY_BUDGET {
            return Err(LabError::BudgetExceeded(format!(
                "{rows} samples × {modes} modes exceeds {DUALITY_BUDGET} entries"
            )));
        }
        let grid = Arc::new(Grid1D::torus(n_x)?);
        let (times, dt) = torus_times(t_samples);
        let c = (2.0 * PI).powf(-1.5);
        let xs = grid.points().to_vec();
        let a = DMatrix::from_fn(rows, modes, |r, m| {
            let (t, x) = (times[r / n_x], xs[r % n_x]);
            let k = m as f64 - cutoff as f64;
            Complex64::from_polar(c, k * x + t * boussinesq_symbol(k))
        });
        Ok(Self { cutoff, grid, times, dt, a })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn modes(&self) -> usize {
        2 * self.cutoff + 1
    }

    pub fn grid(&self) -> &Arc<Grid1D> {
        &self.grid
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.a
    }

    /// A field on this problem's space-time lattice.
    pub fn field(&self, values: Vec<f64>) -> Result<SpaceTimeField> {
        SpaceTimeField::new(self.times.clone(), self.dt, self.grid.clone(), values)
    }

    fn check_system(&self, sys: &TorusSystem) -> Result<()> {
        if sys.cutoff() != self.cutoff {
            return Err(LabError::DimensionMismatch(format!("system cutoff {} against {}", sys.cutoff(), self.cutoff)));
        }
        Ok(())
    }

    /// `Σ_j λ_j |A f_j|²` on the lattice.
    pub fn density(&self, sys: &TorusSystem) -> Result<SpaceTimeField> {
        self.check_system(sys)?;
        let au = &self.a * sys.coeffs();
        let mut rho = vec![0.0; self.a.nrows()];
        for (j, &l) in sys.lambda().iter().enumerate() {
            for (r, v) in rho.iter_mut().zip(au.column(j).iter()) {
                *r += l * v.norm_sqr();
            }
        }
        self.field(rho)
    }

    /// `‖Σ λ_j |A f_j|²‖_{L^p_t L^q_x} / ‖λ‖_{ℓ^β}`.
    pub fn primal_ratio(&self, sys: &TorusSystem, e: &Exponents) -> Result<f64> {
        let rho = self.density(sys)?;
        Ok(mixed_norm(&rho, e.p, e.q, NormOrder::TimeOuter)? / sequence_norm(sys.lambda(), e.beta)?)
    }

    /// `G = (WA)^*(WA)` with the cell measure, whose spectrum is that of `W A A^* W̄`.
    pub fn gram(&self, w: &SpaceTimeField) -> Result<DMatrix<Complex64>> {
        if w.values().len() != self.a.nrows() {
            return Err(LabError::DimensionMismatch("weight field does not match the lattice".into()));
        }
        let cell = (self.dt * self.grid.spacing()).sqrt();
        let mut b = self.a.clone();
        for (mut row, &wv) in b.row_iter_mut().zip(w.values()) {
            row *= Complex64::new(cell * wv, 0.0);
        }
        Ok(b.adjoint() * &b)
    }

    /// `‖W A A^* W̄‖_{𝔖^{β'}} / ‖W‖²_{L^{2p'}_t L^{2q'}_x}`; zero for `W ≡ 0`.
    pub fn dual_ratio(&self, w: &SpaceTimeField, e: &Exponents) -> Result<f64> {
        let (pc, qc, bc) = (conjugate(e.p), conjugate(e.q), conjugate(e.beta));
        let denom = mixed_norm(&w.map(|v| v * v), pc, qc, NormOrder::TimeOuter)?;
        if denom == 0.0 {
            return Ok(0.0);
        }
        let g = self.gram(w)?;
        Ok(schatten_norm(&g, &vec![1.0; g.nrows()], bc)? / denom)
    }

    /// `W* = √V*`, with `V*` the norming field of the system's density.
    pub fn witness(&self, sys: &TorusSystem, e: &Exponents) -> Result<SpaceTimeField> {
        Ok(norming_field(&self.density(sys)?, e.p, e.q)?.map(f64::sqrt))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelCheck {
    pub schatten_2: f64,
    pub kernel_l2: f64,
    pub lambda_l2: f64,
}

impl KernelCheck {
    pub fn max_deviation(&self) -> f64 {
        (self.schatten_2 - self.kernel_l2).abs().max((self.schatten_2 - self.lambda_l2).abs())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualityReport {
    pub exponents: Exponents,
    pub n_x: usize,
    pub t_samples: usize,
    pub cutoff: usize,
    pub primal: Vec<f64>,
    pub dual: Vec<f64>,
    /// Dual ratios at the norming witnesses of the primal samples.
    pub witness_dual: Vec<f64>,
    /// Largest dual ratio over the random and witness weights.
    pub dual_constant: f64,
    pub primal_constant: f64,
    pub holds: bool,
    pub kernel: KernelCheck,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DualityConfig {
    pub p: f64,
    pub q: f64,
    pub beta: f64,
    pub n_x: usize,
    pub t_samples: usize,
    pub cutoff: usize,
    pub batch: usize,
    #[serde(skip)]
    pub seed: u64,
}

impl Default for DualityConfig {
    fn default() -> Self {
        let e = Exponents::on_segment(2.0);
        Self { p: e.p, q: e.q, beta: e.beta, n_x: 64, t_samples: 32, cutoff: 8, batch: 32, seed: 13 }
    }
}

impl DualityConfig {
    pub fn exponents(&self) -> Exponents {
        Exponents { p: self.p, q: self.q, beta: self.beta }
    }
}

/// Relative slack of the consistency check.
pub const DUALITY_SLACK: f64 = 1e-6;

/// A random system with eigenvalues in `[0, 1)` and a Gaussian weight field.
fn sample<R: Rng + ?Sized>(problem: &DualityProblem, rng: &mut R) -> Result<(TorusSystem, SpaceTimeField)> {
    let rank = rng.random_range(1..=problem.modes());
    let sys = TorusSystem::random(problem.cutoff(), rank, 1.0, rng)?;
    let lambda = (0..rank).map(|_| rng.random_range(0.0..1.0)).collect();
    let sys = sys.with_lambda(lambda)?;
    let w = (0..problem.matrix().nrows()).map(|_| StandardNormal.sample(rng)).collect::<Vec<f64>>();
    Ok((sys, problem.field(w)?))
}

/// Primal ratios over a random batch, dual ratios over random weights and
/// the norming witnesses, and the check that no primal sample exceeds the
/// largest dual ratio.
pub fn duality_consistency_check(cfg: &DualityConfig) -> Result<DualityReport> {
    let e = cfg.exponents();
    for (name, v) in [("p", e.p), ("q", e.q), ("β", e.beta)] {
        if !(v >= 1.0) {
            return Err(LabError::InvalidExponent(format!("{name} = {v} must lie in [1, ∞]")));
        }
    }
    let problem = DualityProblem::new(cfg.n_x, cfg.t_samples, cfg.cutoff)?;
    let mut primal = Vec::with_capacity(cfg.batch);
    let mut dual = Vec::with_capacity(cfg.batch);
    let mut witness_dual = Vec::with_capacity(cfg.batch);
    for i in 0..cfg.batch {
        let (sys, w) = sample(&problem, &mut substream(cfg.seed, i as u64))?;
        primal.push(problem.primal_ratio(&sys, &e)?);
        dual.push(problem.dual_ratio(&w, &e)?);
        witness_dual.push(problem.dual_ratio(&problem.witness(&sys, &e)?, &e)?);
    }
    let dual_constant = dual.iter().chain(&witness_dual).cloned().fold(0.0, f64::max);
    let primal_constant = primal.iter().cloned().fold(0.0, f64::max);
    let holds = primal.iter().all(|&p| p <= dual_constant * (1.0 + DUALITY_SLACK));
    let kernel = kernel_check(cfg.n_x, cfg.seed)?;
    Ok(DualityReport {
        exponents: e,
        n_x: cfg.n_x,
        t_samples: cfg.t_samples,
        cutoff: cfg.cutoff,
        primal,
        dual,
        witness_dual,
        dual_constant,
        primal_constant,
        holds,
        kernel,
    })
}

/// Hilbert–Schmidt norm of a random torus operator three ways: singular
/// values of the sampled kernel, the kernel's L² norm, and `‖λ‖_{ℓ²}`.
pub fn kernel_check(n_x: usize, seed: u64) -> Result<KernelCheck> {
    let grid = Arc::new(Grid1D::torus(n_x)?);
    let mut rng = substream(seed, u64::MAX);
    let cutoff = (n_x - 1) / 4;
    let sys = TorusSystem::random(cutoff, 6.min(2 * cutoff + 1), 1.0, &mut rng)?;
    let lambda: Vec<f64> = (0..sys.rank()).map(|_| rng.random_range(-1.0..1.0)).collect();
    let op = CompactOperatorRep::new(lambda, OrthonormalSystem::new(sys.functions(&grid)?, InnerProduct::L2)?)?;
    let k = operator_kernel(&op, 0.3, None)?;
    let w = grid.weights();
    Ok(KernelCheck {
        schatten_2: schatten_norm(&k, w, 2.0)?,
        kernel_l2: kernel_l2_norm(&k, w)?,
        lambda_l2: sequence_norm(op.eigenvalues(), 2.0)?,
    })
}

/// `A u` for coordinates `u`, as a column over the lattice.
pub fn apply(problem: &DualityProblem, u: &DVector<Complex64>) -> DVector<Complex64> {
    problem.matrix() * u
}
