use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::DecayScanReport;
use crate::error::{LabError, Result};

/// The odd phase `ξ √(ξ² + 1)` of the exponential sums.
pub fn odd_symbol(xi: f64) -> f64 {
    xi * (xi * xi + 1.0).sqrt()
}

/// Which indices of `|k| ≤ N` a sum runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SumRange {
    Full,
    /// `1 ≤ k ≤ N`
    Positive,
    /// `−N ≤ k ≤ −1`
    Negative,
}

impl SumRange {
    /// Code used in scan reports: 0, +1, −1.
    pub fn code(&self) -> f64 {
        match self {
            SumRange::Full => 0.0,
            SumRange::Positive => 1.0,
            SumRange::Negative => -1.0,
        }
    }
}

fn term(k: i64, t: f64, x: f64) -> Complex64 {
    let kf = k as f64;
    Complex64::from_polar(1.0, t * odd_symbol(kf) + kf * x)
}

fn one_sided(n: usize, t: f64, x: f64, sign: i64) -> Complex64 {
    (1..=n as i64).map(|k| term(sign * k, t, x)).sum()
}

/// `S_N(t, x) = Σ_{|k|≤N} e^{i(tφ(k) + kx)}` by direct summation.
pub fn exp_sum(n: usize, t: f64, x: f64) -> Complex64 {
    exp_sum_range(n, t, x, SumRange::Full)
}

pub fn exp_sum_range(n: usize, t: f64, x: f64, range: SumRange) -> Complex64 {
    match range {
        SumRange::Positive => one_sided(n, t, x, 1),
        SumRange::Negative => one_sided(n, t, x, -1),
        SumRange::Full => Complex64::new(1.0, 0.0) + one_sided(n, t, x, 1) + one_sided(n, t, x, -1),
    }
}

/// `count` log-spaced times in `[N^{−3}, N^{−1}]`.
pub fn log_spaced_times(n: usize, count: usize) -> Vec<f64> {
    let n = n.max(1) as f64;
    let (lo, hi) = (-3.0 * n.ln(), -n.ln());
    match count {
        0 => vec![],
        1 => vec![1.0 / n],
        _ => (0..count).map(|i| (lo + (hi - lo) * i as f64 / (count - 1) as f64).exp().min(1.0 / n)).collect(),
    }
}

/// `count` equispaced points of `[a, b]`, endpoints included.
pub fn linspace(a: f64, b: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![a],
        _ => (0..count).map(|i| a + (b - a) * i as f64 / (count - 1) as f64).collect(),
    }
}

/// Tabulates `|S_N(t, x)| · |t|^{1/2}` for the full and both one-sided sums.
///
/// Parameters are `(N, t, x, part)` with `part` the [`SumRange::code`];
/// slices are indexed by `(N, part)`.
pub fn exp_sum_decay_scan(
    n_list: &[usize],
    t_samples: impl Fn(usize) -> Vec<f64>,
    x_grid: &[f64],
) -> Result<DecayScanReport> {
    let mut report = DecayScanReport::new(&["N", "t", "x", "part"], "|t|^{-1/2}", &[0, 3]);
    for &n in n_list {
        if n == 0 {
            return Err(LabError::OutOfRange("N must be ≥ 1".into()));
        }
        let ts = t_samples(n);
        if let Some(bad) = ts.iter().find(|&&t| !(t > 0.0 && t <= 1.0 / n as f64)) {
            return Err(LabError::OutOfRange(format!("t = {bad} outside (0, 1/N] for N = {n}")));
        }
        if let Some(bad) = x_grid.iter().find(|x| !(x.abs() <= 1.0)) {
            return Err(LabError::OutOfRange(format!("x = {bad} outside [-1, 1]")));
        }
        let cells: Vec<(f64, f64)> = ts.iter().flat_map(|&t| x_grid.iter().map(move |&x| (t, x))).collect();
        let sums: Vec<(Complex64, Complex64)> =
            cells.par_iter().map(|&(t, x)| (one_sided(n, t, x, 1), one_sided(n, t, x, -1))).collect();
        for (&(t, x), (pos, neg)) in cells.iter().zip(&sums) {
            let full = Complex64::new(1.0, 0.0) + pos + neg;
            let bound = t.powf(-0.5);
            for (range, value) in [(SumRange::Full, full), (SumRange::Positive, *pos), (SumRange::Negative, *neg)] {
                report.push(vec![n as f64, t, x, range.code()], value.norm(), bound)?;
            }
        }
    }
    Ok(report)
}
