//! A numerical laboratory for the Boussinesq propagator `e^{it√(∂⁴-∂²)}`.
//!
//! The crate evolves finite-rank density operators on the line, the torus and
//! the radial unit ball, computes the mixed, weak-Lorentz and Schatten norms
//! that Strichartz-type estimates for orthonormal systems are stated in, and
//! assembles reproducible experiments that measure decay rates and scaling
//! exponents.

// `!(x >= a)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod experiments;
mod fft;
pub mod norms;
pub mod oscillatory;
pub mod randomization;
pub mod spectral;

pub use error::{LabError, Result};
