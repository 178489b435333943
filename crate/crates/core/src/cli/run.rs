use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use super::config::{Experiment, LabConfig};
use crate::error::{LabError, Result};
use crate::experiments::{
    ball_system, band_limited_system, counterexample_sweep, duality_consistency_check, dyadic_times,
    maximal_rank_sweep, pointwise_convergence_scan, strichartz_scan, strichartz_scan_multi, trace_unitarity_suite,
    CheckMode, DualityConfig, MaximalConfig, StrichartzScan,
};
use crate::oscillatory::{
    exp_sum_decay_scan, kernel_decay_scan, linspace, log_spaced_times, Cutoff, OscIntegral, Phase,
};
use crate::randomization::{khinchin_ratio, stochastic_continuity_experiment, substream, Distribution};
use crate::spectral::{CompactOperatorRep, Grid1D};

/// One named pass/fail invariant of a run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, passed: bool, detail: String) -> Check {
    Check { name: name.to_string(), passed, detail }
}

/// Results of one experiment, ready to be written.
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub experiment: Experiment,
    pub checks: Vec<Check>,
    pub results: Value,
    /// `(file suffix, CSV bytes)`
    pub tables: Vec<(String, Vec<u8>)>,
}

impl ExperimentOutput {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| LabError::Io(format!("json: {e}")))
}

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| LabError::Io(format!("csv: {e}"));
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.write_record(&r).map_err(err)?;
    }
    w.into_inner().map_err(|e| LabError::Io(format!("csv: {e}")))
}

fn positive_cutoffs(list: &[i64]) -> Vec<usize> {
    list.iter().map(|&n| n as usize).collect()
}

fn expsum(cfg: &LabConfig) -> Result<ExperimentOutput> {
    let s = &cfg.expsum;
    let report = exp_sum_decay_scan(
        &positive_cutoffs(&s.n_list),
        |n| log_spaced_times(n, s.t_count),
        &linspace(-1.0, 1.0, s.x_count),
    )?;
    let spread = report.filter("part", 0.0)?.spread();
    let mut csv = Vec::new();
    report.write_csv(&mut csv)?;
    Ok(ExperimentOutput {
        experiment: Experiment::Expsum,
        checks: vec![check(
            "sup |S_N|·|t|^{1/2} uniform in N",
            spread <= s.max_spread,
            format!("spread {spread:.4} ≤ {}", s.max_spread),
        )],
        results: json!({ "slice_maxima": report.slice_maxima(), "spread": spread, "bound": report.bound_expr }),
        tables: vec![(String::new(), csv)],
    })
}

fn kernel(cfg: &LabConfig) -> Result<ExperimentOutput> {
    let s = &cfg.kernel;
    let xs = linspace(s.x_min, s.x_max, s.x_count);
    let report = kernel_decay_scan(s.s, &s.ts, &xs)?;
    let spread = report.spread();
    let finite = report.rows.iter().all(|r| r.ratio.is_finite());
    let mut step = 0.0f64;
    for &t in &s.ts {
        let integral = OscIntegral::new(Phase::Even, s.s, Cutoff::for_time(t));
        for &x in &xs {
            step = step.max(integral.self_convergence(x, t)?);
        }
    }
    let trace = trace_unitarity_suite(s.trace_operators, cfg.seed, &s.trace_times)?;
    let mut csv = Vec::new();
    report.write_csv(&mut csv)?;
    Ok(ExperimentOutput {
        experiment: Experiment::Kernel,
        checks: vec![
            check("kernel ratio finite", finite, format!("{} samples", report.rows.len())),
            check(
                "kernel ratio uniform in t",
                spread <= s.max_spread,
                format!("spread {spread:.4} ≤ {}", s.max_spread),
            ),
            check("step-halving self-convergence", step <= s.step_tol, format!("{step:.3e} ≤ {:.0e}", s.step_tol)),
            check(
                "trace conservation",
                trace.max_trace_deviation <= s.trace_tol,
                format!("{:.3e} ≤ {:.0e}", trace.max_trace_deviation, s.trace_tol),
            ),
            check(
                "propagator unitarity",
                trace.max_unitarity_deviation <= s.unitarity_tol,
                format!("{:.3e} ≤ {:.0e}", trace.max_unitarity_deviation, s.unitarity_tol),
            ),
        ],
        results: json!({
            "kernel": { "slice_maxima": report.slice_maxima(), "spread": spread, "self_convergence": step },
            "trace": to_value(&trace)?,
        }),
        tables: vec![(String::new(), csv)],
    })
}

fn scan_rows(scans: &[StrichartzScan]) -> Vec<Vec<String>> {
    scans
        .iter()
        .flat_map(|s| {
            s.points.iter().map(move |p| {
                vec![
                    s.exponents.p.to_string(),
                    s.exponents.q.to_string(),
                    s.exponents.beta.to_string(),
                    p.n.to_string(),
                    p.rank.to_string(),
                    p.lhs_max.to_string(),
                    p.lambda_norm.to_string(),
                    p.ratio_max.to_string(),
                    p.ratio_min.to_string(),
                ]
            })
        })
        .collect()
}

fn strichartz(cfg: &LabConfig) -> Result<ExperimentOutput> {
    let s = &cfg.strichartz;
    let ns = positive_cutoffs(&s.n_list);
    let mut checks = Vec::new();
    let mut sweeps = Vec::new();
    let mut rows = Vec::new();
    for case in &s.counterexample {
        let sweep =
            counterexample_sweep(&ns, case.p, case.q, &case.betas, s.counterexample_t_samples, s.x_points_per_mode)?;
        let tag = format!("(p,q)=({},{})", case.p, case.q);
        checks.push(check(
            &format!("counterexample LHS ∼ N at {tag}"),
            sweep.lhs_fit.matches_claim(s.slope_tol),
            format!("slope {:.4}", sweep.lhs_fit.slope),
        ));
        checks.push(check(
            &format!("counterexample modulus 1/(2π) at {tag}"),
            sweep.modulus_deviation <= 1e-12,
            format!("{:.2e}", sweep.modulus_deviation),
        ));
        for (b, fit) in case.betas.iter().zip(&sweep.ratio_fits) {
            checks.push(check(
                &format!("counterexample ratio slope at {tag}, β={b}"),
                fit.matches_claim(s.slope_tol),
                format!("{:.4} vs {:.4}", fit.slope, fit.claimed_exponent),
            ));
        }
        for (b, recs) in case.betas.iter().zip(&sweep.records) {
            for r in recs {
                rows.push(vec![
                    case.p.to_string(),
                    case.q.to_string(),
                    b.to_string(),
                    r.n.to_string(),
                    r.lhs.to_string(),
                    r.rhs.to_string(),
                    r.ratio.to_string(),
                ]);
            }
        }
        sweeps.push(sweep);
    }
    let ecfg = s.experiment_config(cfg.seeds());
    let scans = if s.mode == CheckMode::Bound {
        let scans = strichartz_scan_multi(&ecfg, &s.triples())?;
        for scan in &scans {
            let e = scan.exponents;
            checks.push(check(
                &format!("LHS/(N^(1/p)‖λ‖_β) bounded at (p,q,β)=({},{},{:.4})", e.p, e.q, e.beta),
                scan.ratio_spread() <= s.max_spread,
                format!("spread {:.4} ≤ {}", scan.ratio_spread(), s.max_spread),
            ));
        }
        scans
    } else {
        let scan = strichartz_scan(&ecfg)?;
        checks.push(check(
            "ratio slope matches the predicted exponent",
            scan.ratio_fit.matches_claim(s.slope_tol),
            format!("{:.4} vs {:.4}", scan.ratio_fit.slope, scan.ratio_fit.claimed_exponent),
        ));
        vec![scan]
    };
    Ok(ExperimentOutput {
        experiment: Experiment::Strichartz,
        checks,
        results: json!({ "counterexample": to_value(&sweeps)?, "scans": to_value(&scans)? }),
        tables: vec![
            ("counterexample".into(), csv_table(&["p", "q", "beta", "N", "lhs", "rhs", "ratio"], rows)?),
            (
                "systems".into(),
                csv_table(
                    &["p", "q", "beta", "N", "rank", "lhs_max", "lambda_norm", "ratio_max", "ratio_min"],
                    scan_rows(&scans),
                )?,
            ),
        ],
    })
}

fn maximal(cfg: &LabConfig) -> Result<ExperimentOutput> {
    let mcfg = MaximalConfig { seed: cfg.seed, ..cfg.maximal.clone() };
    let sweep = maximal_rank_sweep(&mcfg)?;
    let spread = sweep.spread();
    let rows = sweep.rows.iter().flat_map(|r| {
        r.ratios.iter().enumerate().map(move |(i, v)| vec![r.rank.to_string(), i.to_string(), v.to_string()])
    });
    Ok(ExperimentOutput {
        experiment: Experiment::Maximal,
        checks: vec![check("maximal ratio uniform in rank", spread <= 4.0, format!("spread {spread:.4} ≤ 4"))],
        results: json!({ "interval": [0.0, mcfg.t_end], "rows": to_value(&sweep.rows)?, "spread": spread }),
        tables: vec![(String::new(), csv_table(&["rank", "trial", "ratio"], rows)?)],
    })
}

fn converge(cfg: &LabConfig) -> Result<ExperimentOutput> {
    let s = &cfg.converge;
    let grid = Arc::new(Grid1D::default_line());
    let sys = band_limited_system(&grid, 0.0, s.band, s.rank, &mut substream(cfg.seed, 0))?;
    let op = CompactOperatorRep::new(vec![1.0; s.rank], sys)?;
    let mut ts = vec![0.0];
    ts.extend(dyadic_times(s.m_min, s.m_max));
    let table = pointwise_convergence_scan(&op, &ts)?;
    let ratio = table.decay_ratio();
    let mut csv = Vec::new();
    table.write_csv(&mut csv)?;
    Ok(ExperimentOutput {
        experiment: Experiment::Converge,
        checks: vec![
            check(
                "deviation at t = 0 is exactly 0",
                table.rows[0].sup_deviation == 0.0,
                format!("{}", table.rows[0].sup_deviation),
            ),
            check("deviation decays", ratio <= s.max_ratio, format!("last/first {ratio:.3e} ≤ {}", s.max_ratio)),
            check("deviation monotone", table.is_monotone(s.monotone_tol), format!("tolerance {}", s.monotone_tol)),
        ],
        results: to_value(&table)?,
        tables: vec![(String::new(), csv)],
    })
}

fn randomize(cfg: &LabConfig) -> Result<ExperimentOutput> {
    let s = &cfg.randomize;
    let a: Vec<f64> = (1..=s.khinchin_terms).map(|k| 1.0 / k as f64).collect();
    let r2 = khinchin_ratio(&a, 2.0, s.khinchin_samples, cfg.seed, Distribution::Gaussian)?;
    let r4 = khinchin_ratio(&a, 4.0, s.khinchin_samples, cfg.seed2, Distribution::Gaussian)?;
    let mut checks = vec![
        check("Khinchin r=2 ratio is 1", (r2 - 1.0).abs() <= s.khinchin_tol, format!("{r2:.4}")),
        check("Khinchin r=4 ratio is 3^(1/4)", (r4 - 3f64.powf(0.25)).abs() <= s.khinchin_tol, format!("{r4:.4}")),
    ];
    let mut ts = dyadic_times(s.m_min, s.m_max);
    ts.push(0.0);
    let (t_hi, t_lo) = (2f64.powi(-s.m_min), 2f64.powi(-s.m_max));
    let lambda: Vec<f64> = (0..s.rank).map(|j| 0.5f64.powi(j as i32)).collect();
    let mut tables = Vec::new();
    let mut results = Vec::new();
    for g in &s.geometries {
        let mut rng = substream(cfg.seed, 100);
        let sys = match g.as_str() {
            "torus" => {
                band_limited_system(&Arc::new(Grid1D::torus(s.torus_points)?), 0.0, s.torus_band, s.rank, &mut rng)?
            }
            "line" => band_limited_system(&Arc::new(Grid1D::default_line()), 0.0, s.line_band, s.rank, &mut rng)?,
            _ => ball_system(&Arc::new(Grid1D::ball_radial(s.ball_points)?), s.ball_modes, s.rank, &mut rng)?,
        };
        let op = CompactOperatorRep::new(lambda.clone(), sys)?;
        let table = stochastic_continuity_experiment(&op, &ts, s.r, s.samples, cfg.seeds(), Distribution::Gaussian)?;
        let (hi, lo, zero) = (table.at(t_hi).unwrap(), table.at(t_lo).unwrap(), table.at(0.0).unwrap());
        checks.push(check(
            &format!("{g}: F(0) is exactly 0"),
            zero.at_point == 0.0 && zero.spatial_l2 == 0.0,
            String::new(),
        ));
        for (what, a, b) in [("at x0", lo.at_point, hi.at_point), ("in L²_x", lo.spatial_l2, hi.spatial_l2)] {
            checks.push(check(
                &format!("{g}: ‖F‖ {what} vanishes as t → 0"),
                a <= s.max_ratio * b,
                format!("{:.3e} ≤ {} × {:.3e}", a, s.max_ratio, b),
            ));
        }
        let mut csv = Vec::new();
        table.write_csv(&mut csv)?;
        tables.push((g.clone(), csv));
        results.push(to_value(&table)?);
    }
    Ok(ExperimentOutput {
        experiment: Experiment::Randomize,
        checks,
        results: json!({ "khinchin": { "r2": r2, "r4": r4 }, "continuity": results }),
        tables,
    })
}

fn duality(cfg: &LabConfig) -> Result<ExperimentOutput> {
    let dcfg = DualityConfig { seed: cfg.seed, ..cfg.duality.clone() };
    let report = duality_consistency_check(&dcfg)?;
    let rows = (0..report.primal.len()).map(|i| {
        vec![
            i.to_string(),
            report.primal[i].to_string(),
            report.dual[i].to_string(),
            report.witness_dual[i].to_string(),
        ]
    });
    let table = csv_table(&["sample", "primal", "dual", "witness_dual"], rows)?;
    Ok(ExperimentOutput {
        experiment: Experiment::Duality,
        checks: vec![
            check(
                "primal constant within dual constant",
                report.holds,
                format!("{:.6e} ≤ {:.6e}", report.primal_constant, report.dual_constant),
            ),
            check(
                "Schatten-2 norm equals kernel L² norm",
                report.kernel.max_deviation() <= 1e-8,
                format!("{:.2e}", report.kernel.max_deviation()),
            ),
        ],
        results: to_value(&report)?,
        tables: vec![(String::new(), table)],
    })
}

/// Runs one single experiment (not `All`).
pub fn run_experiment(experiment: Experiment, cfg: &LabConfig) -> Result<ExperimentOutput> {
    match experiment {
        Experiment::Expsum => expsum(cfg),
        Experiment::Kernel => kernel(cfg),
        Experiment::Strichartz => strichartz(cfg),
        Experiment::Maximal => maximal(cfg),
        Experiment::Converge => converge(cfg),
        Experiment::Randomize => randomize(cfg),
        Experiment::Duality => duality(cfg),
        Experiment::All => Err(LabError::OutOfRange("`all` expands to the single experiments".into())),
    }
}
