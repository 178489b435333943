use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::draws::{pairwise_sum, substream, Distribution, RandomSeedPair};
use super::operator::randomize_operator_from;
use crate::error::{LabError, Result};
use crate::spectral::{density_function, propagate_many, CompactOperatorRep};

/// Monte-Carlo `(E|Σ_k a_k g_k|^r)^{1/r} / ‖a‖_{ℓ²}` with sample `i` drawn from stream `i` of `seed`.
pub fn khinchin_ratio(a: &[f64], r: f64, n_samples: usize, seed: u64, dist: Distribution) -> Result<f64> {
    if !(r >= 2.0 && r.is_finite()) {
        return Err(LabError::InvalidExponent(format!("Khinchin exponent r = {r} must lie in [2, ∞)")));
    }
    if n_samples == 0 {
        return Err(LabError::OutOfRange("need at least one sample".into()));
    }
    let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(LabError::Degenerate("zero coefficient vector".into()));
    }
    let moments: Vec<f64> = (0..n_samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(seed, i);
            let s: f64 = a.iter().map(|x| x * dist.draw(&mut rng)).sum();
            s.abs().powf(r)
        })
        .collect();
    Ok((pairwise_sum(&moments) / n_samples as f64).powf(1.0 / r) / norm)
}

/// Sample mean of `e^{γ g}`; for standard Gaussians the exact value is `e^{γ²/2}`.
pub fn exponential_moment(gamma: f64, n_samples: usize, seed: u64, dist: Distribution) -> f64 {
    let xs: Vec<f64> =
        (0..n_samples as u64).into_par_iter().map(|i| (gamma * dist.draw(&mut substream(seed, i))).exp()).collect();
    pairwise_sum(&xs) / n_samples.max(1) as f64
}

/// One row of the stochastic-continuity table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuityRow {
    pub t: f64,
    /// `(E|F(t, x₀)|^r)^{1/r}` at the peak of the initial density.
    pub at_point: f64,
    /// `(E‖F(t, ·)‖_{L²_x}^r)^{1/r}`.
    pub spatial_l2: f64,
}

/// Monte-Carlo norms of `F(t) = Σ_j λ_j g_j^{(2)} (|f_j^ω|² − |e^{itφ(D)} f_j^ω|²)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuityTable {
    pub geometry: String,
    pub r: f64,
    pub n_samples: usize,
    pub seeds: RandomSeedPair,
    pub x0: f64,
    pub rows: Vec<ContinuityRow>,
}

impl ContinuityTable {
    /// Row at time `t`, if sampled.
    pub fn at(&self, t: f64) -> Option<&ContinuityRow> {
        self.rows.iter().find(|r| r.t == t)
    }

    /// Whether both columns shrink as `t` decreases, allowing a relative
    /// increase of `tol` between consecutive samples.
    pub fn is_monotone(&self, tol: f64) -> bool {
        let mut rows: Vec<&ContinuityRow> = self.rows.iter().collect();
        rows.sort_by(|a, b| b.t.total_cmp(&a.t));
        rows.windows(2)
            .all(|w| w[1].at_point <= w[0].at_point * (1.0 + tol) && w[1].spatial_l2 <= w[0].spatial_l2 * (1.0 + tol))
    }

    /// CSV with the seeds and reduction point in a leading comment line.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let io = |e: std::io::Error| LabError::Io(format!("csv: {e}"));
        writeln!(
            w,
            "# geometry={} r={} samples={} seed_omega={} seed_omega_tilde={} x0={}",
            self.geometry, self.r, self.n_samples, self.seeds.omega, self.seeds.omega_tilde, self.x0
        )
        .map_err(io)?;
        let mut wr = csv::Writer::from_writer(w);
        for row in &self.rows {
            wr.serialize(row).map_err(|e| LabError::Io(format!("csv: {e}")))?;
        }
        wr.flush().map_err(io)
    }
}

/// Estimates `‖F(t, ω, ω̃)‖_{L^r_{ω,ω̃}}` for each `t` in `t_list`.
///
/// Each sample re-randomizes the whole operator with its own pair of
/// sub-streams; samples run in parallel and are reduced in sample order, so
/// the table depends only on the seeds.
pub fn stochastic_continuity_experiment(
    op: &CompactOperatorRep,
    t_list: &[f64],
    r: f64,
    n_samples: usize,
    seeds: RandomSeedPair,
    dist: Distribution,
) -> Result<ContinuityTable> {
    if !(r >= 2.0 && r.is_finite()) {
        return Err(LabError::InvalidExponent(format!("r = {r} must lie in [2, ∞)")));
    }
    if n_samples == 0 {
        return Err(LabError::OutOfRange("need at least one sample".into()));
    }
    let grid = op
        .system()
        .grid()
        .cloned()
        .ok_or_else(|| LabError::Degenerate("stochastic continuity needs a nonzero operator".into()))?;
    let rho0 = density_function(op, 0.0, None)?;
    let i0 = rho0
        .values
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, v)| if v.abs() > bv { (i, v.abs()) } else { (bi, bv) })
        .0;
    let weights = grid.weights().to_vec();

    let per_sample: Vec<Vec<(f64, f64)>> = (0..n_samples as u64)
        .into_par_iter()
        .map(|i| -> Result<Vec<(f64, f64)>> {
            let (mut r1, mut r2) = seeds.sample_rngs(i);
            let rop = randomize_operator_from(op, dist, &mut r1, &mut r2)?;
            let lw = rop.weights();
            let mut f = vec![vec![0.0; grid.len()]; t_list.len()];
            for (u, &c) in rop.functions().iter().zip(&lw) {
                let evolved = propagate_many(u, t_list)?;
                for (ft, ut) in f.iter_mut().zip(&evolved) {
                    for ((fx, a), b) in ft.iter_mut().zip(u.values()).zip(ut.values()) {
                        *fx += c * (a.norm_sqr() - b.norm_sqr());
                    }
                }
            }
            Ok(f.iter()
                .map(|ft| {
                    let l2 = ft.iter().zip(&weights).map(|(v, w)| w * v * v).sum::<f64>().sqrt();
                    (ft[i0], l2)
                })
                .collect())
        })
        .collect::<Result<_>>()?;

    let rows = t_list
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            let point: Vec<f64> = per_sample.iter().map(|s| s[k].0.abs().powf(r)).collect();
            let l2: Vec<f64> = per_sample.iter().map(|s| s[k].1.powf(r)).collect();
            ContinuityRow {
                t,
                at_point: (pairwise_sum(&point) / n_samples as f64).powf(1.0 / r),
                spatial_l2: (pairwise_sum(&l2) / n_samples as f64).powf(1.0 / r),
            }
        })
        .collect();
    Ok(ContinuityTable {
        geometry: grid.geometry().name().to_string(),
        r,
        n_samples,
        seeds,
        x0: grid.points()[i0],
        rows,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;
    use std::sync::Arc;

    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution as _, StandardNormal};

    use super::*;
    use crate::spectral::{gram_orthonormalize, Grid1D, InnerProduct, OrthonormalSystem, WaveFunction};

    #[test]
    fn khinchin_values() {
        let a = [0.3, -1.2, 0.7, 2.0, 0.1];
        let r2 = khinchin_ratio(&a, 2.0, 10_000, 1, Distribution::Gaussian).unwrap();
        assert!((r2 - 1.0).abs() < 3.0 / 100.0);
        let r4 = khinchin_ratio(&a, 4.0, 10_000, 2, Distribution::Gaussian).unwrap();
        assert!((r4 - 3f64.powf(0.25)).abs() < 0.05);
        // one nonzero entry: (E|g|^3)^{1/3} = (2√(2/π))^{1/3}
        let r3 = khinchin_ratio(&[0.0, -2.5, 0.0], 3.0, 20_000, 3, Distribution::Gaussian).unwrap();
        assert!((r3 - (2.0 * (2.0 / PI).sqrt()).powf(1.0 / 3.0)).abs() < 0.05);
        // Rademacher with one entry is exactly |a|
        assert!((khinchin_ratio(&[4.0], 6.0, 100, 4, Distribution::Rademacher).unwrap() - 1.0).abs() < 1e-15);
        assert!(khinchin_ratio(&a, 1.5, 10, 0, Distribution::Gaussian).is_err());
    }

    #[test]
    fn gaussian_exponential_moments() {
        for gamma in [0.25, 0.5, 1.0] {
            let est = exponential_moment(gamma, 20_000, 7, Distribution::Gaussian);
            let exact = (gamma * gamma / 2.0).exp();
            assert!((est / exact - 1.0).abs() < 0.05, "γ={gamma}: {est} vs {exact}");
        }
        // the moment bound holds analytically for Rademacher signs: cosh γ ≤ e^{γ²/2}
        for gamma in [0.25, 0.5, 1.0, 3.0] {
            assert!(f64::cosh(gamma) <= (gamma * gamma / 2.0).exp());
        }
    }

    fn torus_op(rank: usize, kmax: i64, seed: u64) -> CompactOperatorRep {
        let grid = Arc::new(Grid1D::torus(64).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let modes = (2 * kmax + 1) as usize;
        let raw: Vec<WaveFunction> = (0..rank)
            .map(|_| {
                let mut c = vec![Complex64::new(0.0, 0.0); 64];
                for k in -kmax..=kmax {
                    let b = grid.bin_of(k).unwrap();
                    c[b] = Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng));
                }
                WaveFunction::from_fourier(grid.clone(), &c).unwrap()
            })
            .collect();
        assert!(rank <= modes);
        let sys = gram_orthonormalize(&raw, InnerProduct::L2).unwrap();
        CompactOperatorRep::new((0..rank).map(|j| 1.0 / (j + 1) as f64).collect(), sys).unwrap()
    }

    #[test]
    fn torus_continuity_table() {
        let op = torus_op(4, 3, 1);
        let ts: Vec<f64> = (2..=12).map(|m| 2f64.powi(-m)).chain([0.0]).collect();
        let table =
            stochastic_continuity_experiment(&op, &ts, 2.0, 400, RandomSeedPair::new(1, 2), Distribution::Gaussian)
                .unwrap();
        let last = table.at(0.0).unwrap();
        assert_eq!((last.at_point, last.spatial_l2), (0.0, 0.0));
        let hi = table.at(0.25).unwrap();
        let lo = table.at(2f64.powi(-12)).unwrap();
        assert!(lo.at_point < 0.1 * hi.at_point && lo.spatial_l2 < 0.1 * hi.spatial_l2);
        assert!(table.is_monotone(0.05));
        let again =
            stochastic_continuity_experiment(&op, &ts, 2.0, 400, RandomSeedPair::new(1, 2), Distribution::Gaussian)
                .unwrap();
        assert_eq!(table, again);
        let mut buf = Vec::new();
        table.write_csv(&mut buf).unwrap();
        assert!(String::from_utf8(buf)
            .unwrap()
            .starts_with("# geometry=torus r=2 samples=400 seed_omega=1 seed_omega_tilde=2"));
    }

    #[test]
    fn single_mode_is_stationary() {
        let grid = Arc::new(Grid1D::torus(32).unwrap());
        let f = WaveFunction::plane_wave(grid, 3).unwrap().scaled((1.0 / (2.0 * PI).sqrt()).into());
        let op =
            CompactOperatorRep::new(vec![1.0], OrthonormalSystem::new(vec![f], InnerProduct::L2).unwrap()).unwrap();
        let table = stochastic_continuity_experiment(
            &op,
            &[1.0, 0.1, 0.01],
            2.0,
            50,
            RandomSeedPair::new(3, 4),
            Distribution::Gaussian,
        )
        .unwrap();
        assert!(table.rows.iter().all(|r| r.at_point < 1e-12 && r.spatial_l2 < 1e-12));
    }

    #[test]
    fn rejects_small_r() {
        let op = torus_op(2, 2, 2);
        assert!(stochastic_continuity_experiment(
            &op,
            &[0.1],
            1.0,
            10,
            RandomSeedPair::new(0, 0),
            Distribution::Gaussian
        )
        .is_err());
    }
}
