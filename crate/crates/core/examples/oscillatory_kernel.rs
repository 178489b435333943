//! The smoothed kernel `∫ e^{i(xξ + tφ(ξ))} |ξ|^{-s} dξ` against `|x|^{s-1}`,
//! with the Gauss-Legendre step-halving error at each point.

use boussinesq_lab::oscillatory::{kernel_decay_scan, linspace, Cutoff, OscIntegral, Phase};

fn main() -> boussinesq_lab::Result<()> {
    let s = 0.5;
    let ts = [0.01, 0.1, 1.0];
    let xs = linspace(0.05, 1.0, 32);
    let report = kernel_decay_scan(s, &ts, &xs)?;
    println!("bound {}", report.bound_expr);
    println!("{:>6} {:>12}", "t", "sup ratio");
    for (key, max) in report.slice_maxima() {
        println!("{:>6} {:>12.5}", key[0], max);
    }
    println!("spread across t: {:.3}", report.spread());

    let mut worst = 0.0f64;
    for &t in &ts {
        let integral = OscIntegral::new(Phase::Even, s, Cutoff::for_time(t));
        for &x in &xs {
            worst = worst.max(integral.self_convergence(x, t)?);
        }
    }
    println!("largest step-halving change: {worst:.2e}");
    Ok(())
}
