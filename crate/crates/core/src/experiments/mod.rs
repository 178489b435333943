//! Numerical experiments built on the spectral, norm and randomization
//! layers: torus Strichartz scaling and its counterexample, maximal-in-time
//! estimates on the line, pointwise convergence, duality and trace checks.

mod config;
mod convergence;
mod duality;
mod fit;
mod maximal;
mod strichartz;
mod systems;
mod trace;

pub use config::{beta_endpoint, exponent_violations, CheckMode, ExperimentConfig, Exponents, SystemRecipe};
pub use convergence::{dyadic_times, pointwise_convergence_scan, ConvergenceRow, ConvergenceTable};
pub use duality::{
    apply, duality_consistency_check, kernel_check, DualityConfig, DualityProblem, DualityReport, KernelCheck,
    DUALITY_BUDGET, DUALITY_SLACK,
};
pub use fit::{fit_exponent, PowerFit, ScalingFit};
pub use maximal::{
    lifted_line_operator, maximal_in_time_ratio, maximal_rank_sweep, MaximalConfig, MaximalRow, MaximalSweep,
    MAXIMAL_SOBOLEV_ORDER,
};
pub use strichartz::{
    counterexample_sweep, maximal_space_scaling, optimality_counterexample, strichartz_lhs, strichartz_scaling_torus,
    strichartz_scan, strichartz_scan_multi, torus_times, CounterexampleRecord, CounterexampleSweep, StrichartzPoint,
    StrichartzScan, TorusSystem,
};
pub use systems::{ball_system, band_limited_system};
pub use trace::{random_operator, trace_unitarity_suite, TraceSuiteReport};
