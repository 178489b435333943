//! `sup_x |ρ(t) − ρ(0)|` along dyadic times for a band-limited line system.

use std::sync::Arc;

use boussinesq_lab::experiments::{band_limited_system, dyadic_times, pointwise_convergence_scan};
use boussinesq_lab::randomization::substream;
use boussinesq_lab::spectral::{CompactOperatorRep, Grid1D};

fn main() -> boussinesq_lab::Result<()> {
    let grid = Arc::new(Grid1D::default_line());
    let sys = band_limited_system(&grid, 0.0, 2.0, 4, &mut substream(7, 0))?;
    let op = CompactOperatorRep::new(vec![1.0; 4], sys)?;
    let table = pointwise_convergence_scan(&op, &dyadic_times(2, 12))?;
    for row in &table.rows {
        println!("t = {:.3e}  sup deviation {:.3e}", row.t, row.sup_deviation);
    }
    println!("last/first {:.3e}", table.decay_ratio());
    Ok(())
}
