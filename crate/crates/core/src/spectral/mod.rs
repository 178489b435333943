//! Functions and finite-rank operators on the line, torus and radial ball,
//! evolved exactly in frequency space by the Boussinesq propagator.

mod grid;
mod operator;
mod propagator;
mod system;
mod wave;

pub use grid::{Geometry, Grid1D, DEFAULT_LINE_PERIOD, DEFAULT_LINE_POINTS};
pub use operator::{
    density_function, operator_kernel, weighted_density, CompactOperatorRep, DensityField, KERNEL_POINT_LIMIT,
};
pub use propagator::{ball_symbol, boussinesq_symbol, propagate, propagate_many, truncated_propagate_torus};
pub use system::{gram_orthonormalize, homogeneous_sobolev_lift, lift_system, OrthonormalSystem};
pub use wave::{ball_eigenfunction, ball_project, InnerProduct, WaveFunction};

pub(crate) use propagator::{apply_multiplier, TruncatedEvolution};

/// Pairwise inner products of a declared orthonormal system deviate from `δ_jk` by at most this.
pub const ORTHONORMALITY_TOL: f64 = 1e-8;
/// Relative L² drift allowed under propagation.
pub const UNITARITY_TOL: f64 = 1e-10;
/// Relative residual below which Gram–Schmidt declares rank deficiency.
pub const PIVOT_THRESHOLD: f64 = 1e-10;
/// Relative deviation of `∫ρ` from `Σλ_j`.
pub const TRACE_TOL: f64 = 1e-8;
