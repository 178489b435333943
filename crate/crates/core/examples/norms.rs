//! Mixed Lebesgue, weak Lorentz, Schatten and sequence norms on small inputs.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use boussinesq_lab::norms::{
    conjugate, lorentz_weak_norm_weighted, mixed_norm, norming_field, schatten_norm, sequence_norm, singular_values,
    NormOrder, SpaceTimeField,
};
use boussinesq_lab::spectral::Grid1D;

fn main() -> boussinesq_lab::Result<()> {
    let grid = Arc::new(Grid1D::torus(64)?);
    let times: Vec<f64> = (0..32).map(|i| i as f64 / 32.0).collect();
    let field = SpaceTimeField::from_fn(times, 1.0 / 32.0, grid, |t, x| (1.0 + t) * (1.0 + x.cos()))?;
    let (p, q) = (4.0, 2.0);
    let outer_t = mixed_norm(&field, p, q, NormOrder::TimeOuter)?;
    let outer_x = mixed_norm(&field, p, q, NormOrder::SpaceOuter)?;
    println!("L^{p}_t L^{q}_x = {outer_t:.6}, L^{q}_x L^{p}_t = {outer_x:.6}");

    // the norming field has unit dual norm and pairs to the primal norm
    let w = norming_field(&field, p, q)?;
    let pairing: f64 =
        field.values().iter().zip(w.values()).map(|(f, v)| f * v).sum::<f64>() * field.dt() * field.xgrid().spacing();
    let dual = mixed_norm(&w, conjugate(p), conjugate(q), NormOrder::TimeOuter)?;
    println!("⟨F, W⟩ = {pairing:.6}, ‖W‖ dual = {dual:.6}");

    let values: Vec<f64> = (1..=100).map(|k| 1.0 / k as f64).collect();
    let weights = vec![1.0; values.len()];
    println!("‖1/k‖ in L^{{1,∞}} = {:.6}", lorentz_weak_norm_weighted(&values, &weights, 1.0)?);

    let m = DMatrix::from_fn(4, 4, |i, j| Complex64::new(1.0 / (1 + i + j) as f64, 0.0));
    let w = vec![1.0; 4];
    println!("Hilbert 4×4 singular values {:?}", singular_values(&m, &w)?);
    for a in [1.0, 2.0, f64::INFINITY] {
        println!("  Schatten-{a} = {:.6}", schatten_norm(&m, &w, a)?);
    }
    println!("‖(1, 1/2, 1/4)‖_ℓ^1.5 = {:.6}", sequence_norm(&[1.0, 0.5, 0.25], 1.5)?);
    Ok(())
}
