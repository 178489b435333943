//! The plane-wave counterexample beyond the admissible β, then the
//! orthonormal Strichartz ratio for random systems on the torus.

use boussinesq_lab::experiments::{counterexample_sweep, strichartz_scan, ExperimentConfig, Exponents};

fn main() -> boussinesq_lab::Result<()> {
    let ns = [16, 32, 64, 128];
    let sweep = counterexample_sweep(&ns, 4.0, 2.0, &[1.0, 1.5, 2.0], 8, 4)?;
    println!("counterexample at (p,q)=(4,2): LHS slope {:.4}", sweep.lhs_fit.slope);
    for (b, fit) in sweep.betas.iter().zip(&sweep.ratio_fits) {
        println!("  β = {b}: ratio slope {:.4} (predicted {:.4})", fit.slope, fit.claimed_exponent);
    }

    let e = Exponents::on_segment(2.0);
    let cfg = ExperimentConfig {
        p: e.p,
        q: e.q,
        beta: e.beta,
        n_list: vec![32, 64, 128, 256],
        systems_per_n: 4,
        ..Default::default()
    };
    let scan = strichartz_scan(&cfg)?;
    println!("random systems at (p,q,β)=({},{},{:.4})", e.p, e.q, e.beta);
    for pt in &scan.points {
        println!("  N = {:>4} rank {:>3} ratio ∈ [{:.4}, {:.4}]", pt.n, pt.rank, pt.ratio_min, pt.ratio_max);
    }
    println!(
        "ratio slope {:.4} (predicted {:.4}), spread {:.3}",
        scan.ratio_fit.slope,
        scan.ratio_fit.claimed_exponent,
        scan.ratio_spread()
    );
    Ok(())
}
