//! Khinchin ratios for Gaussian sums, then the stochastic continuity of a
//! randomized torus operator as `t → 0`.

use std::sync::Arc;

use boussinesq_lab::experiments::{band_limited_system, dyadic_times};
use boussinesq_lab::randomization::{
    khinchin_ratio, stochastic_continuity_experiment, substream, Distribution, RandomSeedPair,
};
use boussinesq_lab::spectral::{CompactOperatorRep, Grid1D};

fn main() -> boussinesq_lab::Result<()> {
    let a: Vec<f64> = (1..=16).map(|k| 1.0 / k as f64).collect();
    for r in [2.0, 4.0, 6.0] {
        let g = khinchin_ratio(&a, r, 20_000, 7, Distribution::Gaussian)?;
        let s = khinchin_ratio(&a, r, 20_000, 7, Distribution::Rademacher)?;
        println!("r = {r}: Gaussian {g:.4}, Rademacher {s:.4}");
    }

    let grid = Arc::new(Grid1D::torus(64)?);
    let sys = band_limited_system(&grid, 0.0, 3.0, 4, &mut substream(7, 100))?;
    let op = CompactOperatorRep::new(vec![1.0, 0.5, 0.25, 0.125], sys)?;
    let mut ts = dyadic_times(2, 10);
    ts.push(0.0);
    let table =
        stochastic_continuity_experiment(&op, &ts, 2.0, 500, RandomSeedPair::new(7, 11), Distribution::Gaussian)?;
    println!("{:>12} {:>12} {:>12}", "t", "at x0", "L²_x");
    for row in &table.rows {
        println!("{:>12.3e} {:>12.3e} {:>12.3e}", row.t, row.at_point, row.spatial_l2);
    }
    Ok(())
}
