//! Primal Strichartz ratios against their Schatten-class dual on a small torus grid.

use boussinesq_lab::experiments::{duality_consistency_check, DualityConfig};

fn main() -> boussinesq_lab::Result<()> {
    let report = duality_consistency_check(&DualityConfig::default())?;
    println!(
        "(p,q,β) = ({}, {}, {:.4}), {} samples",
        report.exponents.p,
        report.exponents.q,
        report.exponents.beta,
        report.primal.len()
    );
    println!("largest primal ratio {:.6e}", report.primal_constant);
    println!("largest dual ratio   {:.6e}", report.dual_constant);
    println!("holds: {}, kernel identity deviation {:.1e}", report.holds, report.kernel.max_deviation());
    Ok(())
}
