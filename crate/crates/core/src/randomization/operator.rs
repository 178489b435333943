use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;

use super::draws::{BlockDraws, Distribution, RandomSeedPair};
use super::functions::{blocks_for, randomize_with};
use crate::error::{LabError, Result};
use crate::spectral::{propagate, weighted_density, CompactOperatorRep, DensityField, Grid1D, WaveFunction};

/// `γ₀^{ω,ω̃} = Σ_j λ_j g_j^{(2)} |f_j^ω⟩⟨f_j^ω|`.
///
/// The randomized functions are generally no longer orthonormal, so they are
/// kept as a plain list next to the base operator.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomizedOperator {
    base: CompactOperatorRep,
    g2: Vec<f64>,
    functions: Vec<WaveFunction>,
    seeds: Option<RandomSeedPair>,
}

impl RandomizedOperator {
    pub fn base(&self) -> &CompactOperatorRep {
        &self.base
    }

    pub fn g2(&self) -> &[f64] {
        &self.g2
    }

    pub fn functions(&self) -> &[WaveFunction] {
        &self.functions
    }

    pub fn seeds(&self) -> Option<RandomSeedPair> {
        self.seeds
    }

    pub fn rank(&self) -> usize {
        self.g2.len()
    }

    /// Effective weights `λ_j g_j^{(2)}`.
    pub fn weights(&self) -> Vec<f64> {
        self.base.eigenvalues().iter().zip(&self.g2).map(|(l, g)| l * g).collect()
    }

    /// `ρ(t, x) = Σ_j λ_j g_j^{(2)} |e^{itφ(D)} f_j^ω(x)|²`.
    pub fn density(&self, t: f64, grid: Option<&Arc<Grid1D>>) -> Result<DensityField> {
        let grid = match (self.functions.first(), grid) {
            (Some(f), _) => f.grid().clone(),
            (None, Some(g)) => g.clone(),
            (None, None) => return Err(LabError::Degenerate("rank-0 operator needs an explicit grid".into())),
        };
        let evolved: Vec<WaveFunction> = self.functions.par_iter().map(|f| propagate(f, t)).collect::<Result<_>>()?;
        Ok(DensityField { values: weighted_density(&grid, &self.weights(), &evolved), grid, t })
    }
}

/// Number of ball modes carried by the operator's functions.
fn ball_modes(op: &CompactOperatorRep) -> usize {
    op.system().functions().iter().filter_map(|f| f.coeffs().map(|c| c.len())).max().unwrap_or(1)
}

/// Full randomization from explicit draws: one shared `g^{(1)}` sequence for all `f_j`.
pub fn randomize_operator_with(op: &CompactOperatorRep, g1: &BlockDraws, g2: Vec<f64>) -> Result<RandomizedOperator> {
    if g2.len() != op.rank() {
        return Err(LabError::DimensionMismatch(format!("{} eigenvalue draws for rank {}", g2.len(), op.rank())));
    }
    let functions = op.system().functions().iter().map(|f| randomize_with(f, g1)).collect::<Result<_>>()?;
    Ok(RandomizedOperator { base: op.clone(), g2, functions, seeds: None })
}

/// Draws `g^{(1)}` from `rng1` and `g^{(2)}` from `rng2`, then randomizes.
pub fn randomize_operator_from<R1: Rng + ?Sized, R2: Rng + ?Sized>(
    op: &CompactOperatorRep,
    dist: Distribution,
    rng1: &mut R1,
    rng2: &mut R2,
) -> Result<RandomizedOperator> {
    let g1 = match op.system().grid() {
        Some(grid) => BlockDraws::sample(blocks_for(grid, ball_modes(op))?, dist, rng1),
        None => BlockDraws::from_values(0, vec![]),
    };
    let g2 = dist.draw_n(rng2, op.rank());
    randomize_operator_with(op, &g1, g2)
}

/// One realization of the full randomization, reproducible from `seeds`.
pub fn randomize_operator(
    op: &CompactOperatorRep,
    seeds: RandomSeedPair,
    dist: Distribution,
) -> Result<RandomizedOperator> {
    let (mut r1, mut r2) = seeds.sample_rngs(0);
    let mut out = randomize_operator_from(op, dist, &mut r1, &mut r2)?;
    out.seeds = Some(seeds);
    Ok(out)
}
