//! Evolves a Gaussian packet on the line and a rank-3 operator on the torus:
//! the norm and the trace of the density stay put while the density spreads.

use std::sync::Arc;

use num_complex::Complex64;

use boussinesq_lab::experiments::band_limited_system;
use boussinesq_lab::randomization::substream;
use boussinesq_lab::spectral::{density_function, propagate, CompactOperatorRep, Grid1D, WaveFunction};

fn main() -> boussinesq_lab::Result<()> {
    let line = Arc::new(Grid1D::default_line());
    let packet = WaveFunction::from_fn(line, |x| Complex64::new((-x * x).exp(), 0.0))?;
    for t in [0.0, 0.5, 1.0, 2.0] {
        let u = propagate(&packet, t)?;
        let peak = u.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
        println!("t = {t:<4} ‖u‖ = {:.12}  sup|u| = {peak:.5}", u.l2_norm());
    }

    let torus = Arc::new(Grid1D::torus(128)?);
    let sys = band_limited_system(&torus, 0.0, 6.0, 3, &mut substream(1, 0))?;
    let op = CompactOperatorRep::new(vec![1.0, 0.5, -0.25], sys)?;
    println!("Tr γ = {:.12}", op.trace());
    for t in [0.0, 0.3, 3.0] {
        let rho = density_function(&op, t, None)?;
        println!("t = {t:<4} ∫ρ = {:.12}  sup|ρ| = {:.5}", rho.integral(), rho.max_abs());
    }
    Ok(())
}
