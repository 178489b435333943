//! `‖sup_t |ρ(t)|‖_{L^{2,∞}} / ‖λ‖_ℓ^β` for lifted systems of growing rank.

use boussinesq_lab::experiments::{maximal_rank_sweep, MaximalConfig};

fn main() -> boussinesq_lab::Result<()> {
    let cfg = MaximalConfig { ranks: vec![1, 2, 4, 8], trials: 2, ..Default::default() };
    let sweep = maximal_rank_sweep(&cfg)?;
    for row in &sweep.rows {
        println!("rank {:>2}: max ratio {:.4}", row.rank, row.max_ratio);
    }
    println!("spread {:.3}", sweep.spread());
    Ok(())
}
