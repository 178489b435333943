//! Randomized initial data: Wiener, Fourier and ball-eigenbasis
//! randomization of functions, full randomization of finite-rank operators,
//! and the Monte-Carlo estimators built on them.
//!
//! Every Monte-Carlo sample draws from its own ChaCha stream, and results are
//! reduced in sample order, so outputs depend on the seeds alone and not on
//! the number of threads.

mod draws;
mod functions;
mod montecarlo;
mod operator;

pub use draws::{pairwise_sum, substream, BlockDraws, Distribution, RandomSeedPair};
pub use functions::{
    apply_ball, apply_fourier, apply_wiener, ball_randomize, blocks_for, fourier_randomize_torus, randomize_with,
    torus_blocks, wiener_block, wiener_blocks, wiener_randomize_line,
};
pub use montecarlo::{
    exponential_moment, khinchin_ratio, stochastic_continuity_experiment, ContinuityRow, ContinuityTable,
};
pub use operator::{randomize_operator, randomize_operator_from, randomize_operator_with, RandomizedOperator};
