//! Decay of the Boussinesq exponential sums: `sup |S_N(t,x)|·|t|^{1/2}` per N.

use boussinesq_lab::oscillatory::{exp_sum_decay_scan, linspace, log_spaced_times};

fn main() -> boussinesq_lab::Result<()> {
    let xs = linspace(-1.0, 1.0, 257);
    let report = exp_sum_decay_scan(&[64, 256, 1024], |n| log_spaced_times(n, 32), &xs)?;
    println!("{:>6} {:>5} {:>12}", "N", "part", "sup ratio");
    for (key, max) in report.slice_maxima() {
        println!("{:>6} {:>5} {:>12.5}", key[0], key[1], max);
    }
    let full = report.filter("part", 0.0)?;
    println!("spread across N of the full sum: {:.3}", full.spread());
    Ok(())
}
