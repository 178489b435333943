use serde::{Deserialize, Serialize};

/// `exp(−1/(1−x²))` on `(−1, 1)`, zero outside.
pub fn mollifier(x: f64) -> f64 {
    let d = 1.0 - x * x;
    if d <= 0.0 {
        0.0
    } else {
        (-1.0 / d).exp()
    }
}

/// Σ_j b(u − j): at most two terms are nonzero and the sum is 1-periodic and positive.
fn periodized(u: f64) -> f64 {
    let f = u.floor();
    mollifier(u - f) + mollifier(u - f - 1.0)
}

/// The smooth bumps behind both frequency decompositions.
///
/// `Dyadic` is supported in `1/2 < |ξ| < 2` and square-normalized so that
/// `Σ_k ψ²(2^k |ξ|) = 1` for `ξ ≠ 0`. `Flat` is supported in `|ξ| < 1` and
/// satisfies `Σ_k ψ(ξ − k) = 1` on the whole line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BumpFunction {
    Dyadic,
    Flat,
}

impl BumpFunction {
    pub fn eval(&self, xi: f64) -> f64 {
        match self {
            BumpFunction::Dyadic => {
                let a = xi.abs();
                if a <= 0.5 || a >= 2.0 {
                    return 0.0;
                }
                let u = a.log2();
                (mollifier(u) / periodized(u)).sqrt()
            }
            BumpFunction::Flat => {
                let b = mollifier(xi);
                if b == 0.0 {
                    0.0
                } else {
                    b / periodized(xi)
                }
            }
        }
    }

    /// `ψ(2^{−k} ξ)`, the bump at dyadic scale `2^k`.
    pub fn dilate(&self, k: i32, xi: f64) -> f64 {
        self.eval(xi * 2f64.powi(-k))
    }

    /// `ψ(ξ − k)`, the unit window centred at `k`.
    pub fn shift(&self, k: i64, xi: f64) -> f64 {
        self.eval(xi - k as f64)
    }

    /// Closed interval outside which the bump at scale `2^k` vanishes (positive half-line for `Dyadic`).
    pub fn dyadic_support(k: i32) -> (f64, f64) {
        let s = 2f64.powi(k);
        (0.5 * s, 2.0 * s)
    }
}

/// `max |Σ_{k∈ks} ψ²(2^k ξ) − 1|` over `samples` log-spaced points of `[lo, hi]`.
///
/// An empty `ks` leaves the sum at zero, so the deviation is 1.
pub fn dyadic_partition_check(lo: f64, hi: f64, ks: std::ops::RangeInclusive<i32>, samples: usize) -> f64 {
    let samples = samples.max(1);
    let (a, b) = (lo.max(f64::MIN_POSITIVE).ln(), hi.max(f64::MIN_POSITIVE).ln());
    (0..samples)
        .map(|i| {
            let xi = if samples == 1 { lo } else { (a + (b - a) * i as f64 / (samples - 1) as f64).exp() };
            let sum: f64 = ks.clone().map(|k| BumpFunction::Dyadic.eval(2f64.powi(k) * xi).powi(2)).sum();
            (sum - 1.0).abs()
        })
        .fold(0.0, f64::max)
}
