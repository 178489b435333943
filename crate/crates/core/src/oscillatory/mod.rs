//! Exponential sums, oscillatory-integral kernels, the bump functions behind
//! the frequency decompositions, and decay scans that report empirical
//! constants against claimed bounds.

mod bump;
mod expsum;
mod integral;
mod report;

pub use bump::{dyadic_partition_check, mollifier, BumpFunction};
pub use expsum::{exp_sum, exp_sum_decay_scan, exp_sum_range, linspace, log_spaced_times, odd_symbol, SumRange};
pub use integral::{
    kernel_decay_scan, odd_phase_decay_scan, osc_integral, windowed_kernel_scan, Cutoff, OscIntegral, Phase,
};
pub use report::{DecayRow, DecayScanReport};
