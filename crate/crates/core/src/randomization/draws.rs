use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, StandardNormal};
use serde::{Deserialize, Serialize};

/// Seeds of the two independent probability spaces: `omega` drives the
/// function randomization `g^{(1)}`, `omega_tilde` the eigenvalue signs `g^{(2)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomSeedPair {
    pub omega: u64,
    pub omega_tilde: u64,
}

impl RandomSeedPair {
    pub fn new(omega: u64, omega_tilde: u64) -> Self {
        Self { omega, omega_tilde }
    }

    /// Generators for Monte-Carlo sample `index`, one per probability space.
    pub fn sample_rngs(&self, index: u64) -> (ChaCha8Rng, ChaCha8Rng) {
        (substream(self.omega, index), substream(self.omega_tilde, index))
    }
}

/// ChaCha stream `index` of `seed`; distinct indices give independent sequences.
pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Law of the zero-mean, unit-variance multipliers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Distribution {
    #[default]
    Gaussian,
    /// Uniform random signs.
    Rademacher,
    /// Every draw equals 1; a control that switches randomization off.
    Degenerate,
}

impl Distribution {
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Distribution::Gaussian => StandardNormal.sample(rng),
            Distribution::Rademacher => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            Distribution::Degenerate => 1.0,
        }
    }

    pub fn draw_n<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.draw(rng)).collect()
    }
}

/// One multiplier per block index in a contiguous range, drawn in increasing index order.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockDraws {
    first: i64,
    values: Vec<f64>,
}

impl BlockDraws {
    pub fn sample<R: Rng + ?Sized>(blocks: RangeInclusive<i64>, dist: Distribution, rng: &mut R) -> Self {
        let first = *blocks.start();
        let values = blocks.map(|_| dist.draw(rng)).collect();
        Self { first, values }
    }

    pub fn from_values(first: i64, values: Vec<f64>) -> Self {
        Self { first, values }
    }

    /// Multiplier of block `k`; zero outside the sampled range.
    pub fn get(&self, k: i64) -> f64 {
        let i = k - self.first;
        if i < 0 {
            return 0.0;
        }
        self.values.get(i as usize).copied().unwrap_or(0.0)
    }

    pub fn range(&self) -> RangeInclusive<i64> {
        self.first..=self.first + self.values.len() as i64 - 1
    }
}

/// Sum by recursive halving, so that the result depends only on the order of `xs`.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<f64> = Distribution::Gaussian.draw_n(&mut substream(7, 3), 5);
        let b: Vec<f64> = Distribution::Gaussian.draw_n(&mut substream(7, 3), 5);
        let c: Vec<f64> = Distribution::Gaussian.draw_n(&mut substream(7, 4), 5);
        assert_eq!(a, b);
        assert_ne!(a, c);
        let (mut r1, mut r2) = RandomSeedPair::new(1, 2).sample_rngs(0);
        assert_ne!(Distribution::Gaussian.draw(&mut r1), Distribution::Gaussian.draw(&mut r2));
    }

    #[test]
    fn rademacher_signs() {
        let xs = Distribution::Rademacher.draw_n(&mut substream(1, 0), 1000);
        assert!(xs.iter().all(|x| x.abs() == 1.0));
        assert!(xs.iter().sum::<f64>().abs() < 150.0);
    }

    #[test]
    fn blocks() {
        let d = BlockDraws::from_values(-2, vec![1.0, 2.0, 3.0]);
        assert_eq!(d.get(-2), 1.0);
        assert_eq!(d.get(0), 3.0);
        assert_eq!(d.get(1), 0.0);
        assert_eq!(d.get(-3), 0.0);
        assert_eq!(d.range(), -2..=0);
    }

    #[test]
    fn pairwise() {
        let xs: Vec<f64> = (1..=1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 500500.0);
        assert_eq!(pairwise_sum(&[]), 0.0);
    }
}
