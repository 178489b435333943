//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

use std::sync::Arc;
use std::time::{Duration, Instant};

use boussinesq_lab::experiments::{
    ball_system, band_limited_system, counterexample_sweep, duality_consistency_check, dyadic_times,
    maximal_rank_sweep, pointwise_convergence_scan, strichartz_scan_multi, trace_unitarity_suite, DualityConfig,
    ExperimentConfig, Exponents, MaximalConfig,
};
use boussinesq_lab::oscillatory::{
    exp_sum_decay_scan, kernel_decay_scan, linspace, log_spaced_times, Cutoff, OscIntegral, Phase,
};
use boussinesq_lab::randomization::{
    khinchin_ratio, stochastic_continuity_experiment, substream, Distribution, RandomSeedPair,
};
use boussinesq_lab::spectral::{CompactOperatorRep, Grid1D, OrthonormalSystem};
use boussinesq_lab::Result;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

const N_LIST: [usize; 5] = [64, 128, 256, 512, 1024];

fn trace_suite() -> Result<Outcome> {
    let r = trace_unitarity_suite(100, 1, &[0.0, 0.1, 1.0])?;
    Ok(outcome(
        r.max_trace_deviation <= 1e-8 && r.max_unitarity_deviation <= 1e-10,
        format!("trace dev {:.2e}, L² dev {:.2e}", r.max_trace_deviation, r.max_unitarity_deviation),
    ))
}

fn exponential_sums() -> Result<Outcome> {
    let report = exp_sum_decay_scan(&[64, 256, 1024], |n| log_spaced_times(n, 32), &linspace(-1.0, 1.0, 257))?;
    let spread = report.filter("part", 0.0)?.spread();
    Ok(outcome(spread <= 4.0, format!("spread across N {spread:.3}")))
}

fn kernel_decay() -> Result<Outcome> {
    let ts = [0.01, 0.1, 1.0];
    let xs = linspace(0.05, 1.0, 64);
    let report = kernel_decay_scan(0.5, &ts, &xs)?;
    let finite = report.rows.iter().all(|r| r.ratio.is_finite());
    let spread = report.spread();
    let mut worst = 0.0f64;
    for &t in &ts {
        let integral = OscIntegral::new(Phase::Even, 0.5, Cutoff::for_time(t));
        for &x in &xs {
            worst = worst.max(integral.self_convergence(x, t)?);
        }
    }
    Ok(outcome(
        finite && spread <= 4.0 && worst <= 1e-6,
        format!("spread across t {spread:.3}, step-halving {worst:.2e}"),
    ))
}

fn strichartz_optimality() -> Result<Outcome> {
    let cases: [(f64, f64, Vec<f64>); 3] = [
        (4.0, 2.0, vec![1.0, 4.0 / 3.0, 1.8]),
        (f64::INFINITY, 1.0, vec![1.0, 1.5]),
        (2.0, f64::INFINITY, vec![1.5, 2.0, 3.0]),
    ];
    let mut passed = true;
    let mut detail = Vec::new();
    for (p, q, betas) in cases {
        let sweep = counterexample_sweep(&N_LIST, p, q, &betas, 8, 4)?;
        passed &= sweep.lhs_fit.matches_claim(0.05) && sweep.modulus_deviation <= 1e-12;
        let mut parts = vec![format!("(p,q)=({p},{q}) LHS slope {:.3}", sweep.lhs_fit.slope)];
        for (b, fit) in betas.iter().zip(&sweep.ratio_fits) {
            passed &= fit.matches_claim(0.05);
            parts.push(format!("β={b:.3}: {:.3} vs {:.3}", fit.slope, fit.claimed_exponent));
        }
        detail.push(parts.join(", "));
    }
    Ok(outcome(passed, detail.join("; ")))
}

fn strichartz_typicality() -> Result<Outcome> {
    let triples = [Exponents::on_segment(1.0), Exponents::on_segment(2.0), Exponents::on_segment(4.0)];
    let cfg = ExperimentConfig { n_list: N_LIST.iter().map(|&n| n as i64).collect(), ..Default::default() };
    let scans = strichartz_scan_multi(&cfg, &triples)?;
    let spreads: Vec<f64> = scans.iter().map(|s| s.ratio_spread()).collect();
    Ok(outcome(
        spreads.iter().all(|&s| s <= 4.0),
        format!("ratio spread per triple {:?}", spreads.iter().map(|s| format!("{s:.3}")).collect::<Vec<_>>()),
    ))
}

fn pointwise_convergence() -> Result<Outcome> {
    let grid = Arc::new(Grid1D::default_line());
    let sys = band_limited_system(&grid, 0.0, 2.0, 4, &mut substream(7, 0))?;
    let op = CompactOperatorRep::new(vec![1.0; 4], sys)?;
    let mut ts = vec![0.0];
    ts.extend(dyadic_times(2, 12));
    let table = pointwise_convergence_scan(&op, &ts)?;
    let ratio = table.decay_ratio();
    Ok(outcome(
        table.rows[0].sup_deviation == 0.0 && ratio <= 0.01 && table.is_monotone(0.05),
        format!("deviation(2^-12)/deviation(2^-2) = {ratio:.2e}"),
    ))
}

fn maximal_in_time() -> Result<Outcome> {
    let sweep = maximal_rank_sweep(&MaximalConfig::default())?;
    let spread = sweep.spread();
    Ok(outcome(spread <= 4.0, format!("spread across ranks {spread:.3}")))
}

fn khinchin() -> Result<Outcome> {
    let a: Vec<f64> = (1..=16).map(|k| 1.0 / k as f64).collect();
    let r2 = khinchin_ratio(&a, 2.0, 10_000, 7, Distribution::Gaussian)?;
    let r4 = khinchin_ratio(&a, 4.0, 10_000, 11, Distribution::Gaussian)?;
    Ok(outcome(
        (r2 - 1.0).abs() <= 0.05 && (r4 - 3f64.powf(0.25)).abs() <= 0.05,
        format!("r=2 {r2:.4}, r=4 {r4:.4} (3^1/4 = {:.4})", 3f64.powf(0.25)),
    ))
}

fn continuity_operator(geometry: &str) -> Result<CompactOperatorRep> {
    let mut rng = substream(7, 100);
    let sys: OrthonormalSystem = match geometry {
        "torus" => band_limited_system(&Arc::new(Grid1D::torus(64)?), 0.0, 3.0, 4, &mut rng)?,
        "line" => band_limited_system(&Arc::new(Grid1D::default_line()), 0.0, 2.0, 4, &mut rng)?,
        _ => ball_system(&Arc::new(Grid1D::ball_radial(128)?), 4, 4, &mut rng)?,
    };
    CompactOperatorRep::new(vec![1.0, 0.5, 0.25, 0.125], sys)
}

fn stochastic_continuity() -> Result<Outcome> {
    let mut ts = dyadic_times(2, 12);
    ts.push(0.0);
    let mut passed = true;
    let mut detail = Vec::new();
    for geometry in ["torus", "line", "ball"] {
        let start = Instant::now();
        let op = continuity_operator(geometry)?;
        let table =
            stochastic_continuity_experiment(&op, &ts, 2.0, 1000, RandomSeedPair::new(7, 11), Distribution::Gaussian)?;
        let elapsed = start.elapsed();
        let (hi, lo, zero) = (table.at(0.25).unwrap(), table.at(2f64.powi(-12)).unwrap(), table.at(0.0).unwrap());
        let point = lo.at_point / hi.at_point;
        let l2 = lo.spatial_l2 / hi.spatial_l2;
        passed &= point <= 0.1
            && l2 <= 0.1
            && zero.at_point == 0.0
            && zero.spatial_l2 == 0.0
            && elapsed < Duration::from_secs(120);
        detail.push(format!("{geometry}: point {point:.2e}, L² {l2:.2e}, {:.1}s", elapsed.as_secs_f64()));
    }
    Ok(outcome(passed, detail.join("; ")))
}

fn duality() -> Result<Outcome> {
    let r = duality_consistency_check(&DualityConfig::default())?;
    let dev = r.kernel.max_deviation();
    Ok(outcome(
        r.holds && r.primal.len() == 32 && dev <= 1e-8,
        format!("primal max {:.4e} ≤ dual max {:.4e}, 𝔖² vs kernel L² {dev:.1e}", r.primal_constant, r.dual_constant),
    ))
}

type Criterion = (&'static str, fn() -> Result<Outcome>, Duration);

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 trace and unitarity", trace_suite, Duration::from_secs(10)),
        ("2 exponential-sum decay", exponential_sums, Duration::from_secs(30)),
        ("3 oscillatory kernel decay", kernel_decay, Duration::from_secs(60)),
        ("4 Strichartz optimality", strichartz_optimality, Duration::from_secs(60)),
        ("5 Strichartz typicality", strichartz_typicality, Duration::from_secs(300)),
        ("6 pointwise convergence", pointwise_convergence, Duration::from_secs(10)),
        ("7 maximal-in-time rank stability", maximal_in_time, Duration::from_secs(60)),
        ("8 Khinchin moments", khinchin, Duration::from_secs(5)),
        ("9 stochastic continuity", stochastic_continuity, Duration::from_secs(360)),
        ("10 duality consistency", duality, Duration::from_secs(60)),
    ];
    let mut failures = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let (passed, detail) = match result {
            Ok(o) => (o.passed && elapsed <= budget, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !passed {
            failures += 1;
        }
        println!(
            "{} criterion {name}: {detail} [{:.2}s / {}s]",
            if passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("{} of 10 criteria passed", 10 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
