use std::sync::OnceLock;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bump::BumpFunction;
use super::expsum::odd_symbol;
use super::report::DecayScanReport;
use crate::error::{LabError, Result};
use crate::spectral::boussinesq_symbol;

/// Nodes per composite panel; the step `h` is the panel width over this.
const PANEL_ORDER: usize = 8;
/// Graded levels between the first regular panel and the origin.
const GRADED_LEVELS: i32 = 20;
/// Quadrature points per oscillation at the largest frequency.
const POINTS_PER_OSCILLATION: f64 = 16.0;
/// Upper bound on the step relative to the integration range, for barely oscillating integrands.
const MIN_STEPS: f64 = 512.0;

fn rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(PANEL_ORDER).expect("order ≥ 2")).as_node_weight_pairs()
}

/// Phase function in the exponent `i(xξ + tφ(ξ))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    /// `√(ξ⁴ + ξ²)`
    Even,
    /// `ξ √(ξ² + 1)`
    Odd,
    /// `ξ² + 1/2`, whose integral over the line is Gaussian.
    Quadratic,
}

impl Phase {
    pub fn eval(&self, xi: f64) -> f64 {
        match self {
            Phase::Even => boussinesq_symbol(xi),
            Phase::Odd => odd_symbol(xi),
            Phase::Quadratic => xi * xi + 0.5,
        }
    }

    fn is_odd(&self) -> bool {
        matches!(self, Phase::Odd)
    }

    /// Upper bound for `|φ'|` on `[−Ξ, Ξ]`.
    pub fn slope_bound(&self, xi_max: f64) -> f64 {
        match self {
            Phase::Even | Phase::Odd => 2.0 * (xi_max * xi_max + 1.0).sqrt(),
            Phase::Quadratic => 2.0 * xi_max,
        }
    }
}

/// Frequency truncation of the integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "xi", rename_all = "snake_case")]
pub enum Cutoff {
    /// Indicator of `|ξ| ≤ Ξ`.
    Sharp(f64),
    /// Equal to 1 on `|ξ| ≤ Ξ/2`, decaying smoothly to 0 at `|ξ| = Ξ`.
    Smooth(f64),
}

fn smooth_step(u: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    if u >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / u).exp();
    let b = (-1.0 / (1.0 - u)).exp();
    a / (a + b)
}

impl Cutoff {
    pub fn xi_max(&self) -> f64 {
        match *self {
            Cutoff::Sharp(x) | Cutoff::Smooth(x) => x,
        }
    }

    pub fn eval(&self, xi: f64) -> f64 {
        let a = xi.abs();
        match *self {
            Cutoff::Sharp(m) => {
                if a <= m {
                    1.0
                } else {
                    0.0
                }
            }
            Cutoff::Smooth(m) => 1.0 - smooth_step((a - 0.5 * m) / (0.5 * m)),
        }
    }

    /// A smooth cutoff wide enough that the dispersive phase dominates the taper.
    pub fn for_time(t: f64) -> Self {
        Cutoff::Smooth(40f64.max(4.0 / t.abs()))
    }
}

/// `∫ e^{i(xξ + tφ(ξ))} |ξ|^{−s} w(ξ) dξ` with `w` a cutoff times an optional dyadic window.
///
/// The range `[0, Ξ]` (folded from `[−Ξ, Ξ]`) is covered by Gauss–Legendre
/// panels of width `8h`. Below the first panel the mesh is graded
/// geometrically towards the origin over 20 levels, and the last piece
/// `[0, δ]` is integrated against `|ξ|^{−s}` in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscIntegral {
    pub phase: Phase,
    pub s: f64,
    pub cutoff: Cutoff,
    /// Scale `k` of the window `ψ(2^{−k}|ξ|)`.
    pub window: Option<i32>,
}

impl OscIntegral {
    pub fn new(phase: Phase, s: f64, cutoff: Cutoff) -> Self {
        Self { phase, s, cutoff, window: None }
    }

    pub fn windowed(mut self, k: i32) -> Self {
        self.window = Some(k);
        self
    }

    /// Integration range on the positive half-line.
    fn range(&self) -> (f64, f64) {
        let xi_max = self.cutoff.xi_max();
        match self.window {
            Some(k) => {
                let (a, b) = BumpFunction::dyadic_support(k);
                (a.min(xi_max), b.min(xi_max))
            }
            None => (0.0, xi_max),
        }
    }

    /// Largest admissible step: 16 points per oscillation at the top frequency.
    pub fn required_step(&self, x: f64, t: f64) -> f64 {
        let (a, b) = self.range();
        let rate = x.abs() + t.abs() * self.phase.slope_bound(b);
        let cap = (b - a) / MIN_STEPS;
        if rate == 0.0 {
            cap
        } else {
            (2.0 * std::f64::consts::PI / (POINTS_PER_OSCILLATION * rate)).min(cap)
        }
    }

    fn validate(&self, t: f64) -> Result<()> {
        if t.abs() > 1.0 || !t.is_finite() {
            return Err(LabError::OutOfRange(format!("|t| = {} exceeds 1", t.abs())));
        }
        if !(self.s < 1.0) {
            return Err(LabError::InvalidExponent(format!("weight exponent s = {} must be < 1", self.s)));
        }
        let m = self.cutoff.xi_max();
        if !(m.is_finite() && m > 0.0) {
            return Err(LabError::OutOfRange(format!("cutoff Ξ = {m} must be positive")));
        }
        Ok(())
    }

    pub fn eval(&self, x: f64, t: f64) -> Result<Complex64> {
        self.eval_with_step(x, t, self.required_step(x, t))
    }

    /// As [`eval`](Self::eval) with an explicit step, rejected if it under-resolves the phase.
    pub fn eval_with_step(&self, x: f64, t: f64, h: f64) -> Result<Complex64> {
        self.validate(t)?;
        let required = self.required_step(x, t);
        if !(h > 0.0) || h > required * (1.0 + 1e-12) {
            return Err(LabError::UnderResolved { step: h, required });
        }
        let (a, b) = self.range();
        if b <= a {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let width = PANEL_ORDER as f64 * h;
        let mut total = Complex64::new(0.0, 0.0);
        let mut start = a;
        if a == 0.0 {
            let delta0 = width.min(b);
            let mut hi = delta0;
            for _ in 0..GRADED_LEVELS {
                let lo = 0.5 * hi;
                total += self.panel(x, t, lo, hi);
                hi = lo;
            }
            // |ξ|^{−s} integrated exactly against the frozen smooth factor.
            total += self.folded(x, t, 0.0) * hi.powf(1.0 - self.s) / (1.0 - self.s);
            start = delta0;
        }
        let panels = ((b - start) / width).ceil() as usize;
        if panels > 0 {
            let step = (b - start) / panels as f64;
            total += (0..panels)
                .into_par_iter()
                .map(|i| self.panel(x, t, start + i as f64 * step, start + (i + 1) as f64 * step))
                .collect::<Vec<_>>()
                .iter()
                .sum::<Complex64>();
        }
        Ok(total)
    }

    /// `g(ξ) + g(−ξ)` for the smooth part, without the `|ξ|^{−s}` weight.
    fn folded(&self, x: f64, t: f64, xi: f64) -> Complex64 {
        let mut w = self.cutoff.eval(xi);
        if let Some(k) = self.window {
            w *= BumpFunction::Dyadic.dilate(k, xi);
        }
        if w == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let p = self.phase.eval(xi);
        let plus = x * xi + t * p;
        let minus = -x * xi + t * if self.phase.is_odd() { -p } else { p };
        (Complex64::from_polar(1.0, plus) + Complex64::from_polar(1.0, minus)) * w
    }

    fn panel(&self, x: f64, t: f64, lo: f64, hi: f64) -> Complex64 {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        rule()
            .iter()
            .map(|&(node, weight)| {
                let xi = mid + half * node;
                self.folded(x, t, xi) * (weight * half * xi.powf(-self.s))
            })
            .sum()
    }

    /// `|I_h − I_{h/2}| / |I_{h/2}|` at the admissible step.
    pub fn self_convergence(&self, x: f64, t: f64) -> Result<f64> {
        let h = self.required_step(x, t);
        let coarse = self.eval_with_step(x, t, h)?;
        let fine = self.eval_with_step(x, t, 0.5 * h)?;
        Ok((coarse - fine).norm() / fine.norm().max(f64::MIN_POSITIVE))
    }
}

/// The Boussinesq kernel integral with weight `|ξ|^{−s}`, cutoff and optional window.
pub fn osc_integral(x: f64, t: f64, s: f64, cutoff: Cutoff, window: Option<i32>) -> Result<Complex64> {
    OscIntegral { phase: Phase::Even, s, cutoff, window }.eval(x, t)
}

/// `|∫ e^{i(xξ+tφ)} |ξ|^{−s} dξ| · |x|^{1−s}` over `ts × xs`, sliced by `t`.
pub fn kernel_decay_scan(s: f64, ts: &[f64], xs: &[f64]) -> Result<DecayScanReport> {
    let mut report = DecayScanReport::new(&["t", "x"], format!("|x|^{}", s - 1.0), &[0]);
    for &t in ts {
        let integral = OscIntegral::new(Phase::Even, s, Cutoff::for_time(t));
        for &x in xs {
            let v = integral.eval(x, t)?;
            report.push(vec![t, x], v.norm(), x.abs().powf(s - 1.0))?;
        }
    }
    Ok(report)
}

/// Windowed kernels against `2^k / (1 + 2^k|x|)^{1/2}`, sliced by `k`.
pub fn windowed_kernel_scan(ks: &[i32], ts: &[f64], xs_per_k: impl Fn(i32) -> Vec<f64>) -> Result<DecayScanReport> {
    let mut report = DecayScanReport::new(&["k", "t", "x"], "2^k/(1+2^k|x|)^{1/2}", &[0]);
    for &k in ks {
        let scale = 2f64.powi(k);
        let integral = OscIntegral::new(Phase::Even, 0.0, Cutoff::Sharp(4.0 * scale)).windowed(k);
        for &t in ts {
            for x in xs_per_k(k) {
                let v = integral.eval(x, t)?;
                report.push(vec![k as f64, t, x], v.norm(), scale / (1.0 + scale * x.abs()).sqrt())?;
            }
        }
    }
    Ok(report)
}

/// Odd-phase integrals over `|ξ| ≤ Ξ` against `|t|^{−1/2}`, sliced by `t`.
pub fn odd_phase_decay_scan(xi_max: f64, ts: &[f64], xs: &[f64]) -> Result<DecayScanReport> {
    let mut report = DecayScanReport::new(&["t", "x"], "|t|^{-1/2}", &[0]);
    let integral = OscIntegral::new(Phase::Odd, 0.0, Cutoff::Sharp(xi_max));
    for &t in ts {
        for &x in xs {
            let v = integral.eval(x, t)?;
            report.push(vec![t, x], v.norm(), t.abs().powf(-0.5))?;
        }
    }
    Ok(report)
}
