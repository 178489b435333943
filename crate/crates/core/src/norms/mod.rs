//! The norms the estimates are stated in: mixed space-time Lebesgue norms,
//! weak Lorentz norms, Schatten norms and sequence norms.

mod lorentz;
mod mixed;
mod schatten;

use serde::{Deserialize, Serialize};

use crate::error::Result;

pub use lorentz::{lorentz_weak_norm, lorentz_weak_norm_weighted};
pub use mixed::{mixed_norm, norming_field, NormOrder, SpaceTimeField};
pub use schatten::{kernel_l2_norm, schatten_norm, schatten_norm_of, singular_values};

pub(crate) use mixed::weighted_lp;

/// Hölder conjugate: `1/p + 1/p' = 1`, with `1 ↔ ∞`.
pub fn conjugate(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// Descriptor of a norm with exponents in `[1, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormSpec {
    Mixed { p: f64, q: f64, order: NormOrder },
    Lorentz { p: f64, r: f64 },
    Schatten { alpha: f64 },
    Sequence { beta: f64 },
}

impl NormSpec {
    /// The same kind of norm with every exponent replaced by its conjugate.
    pub fn conjugate(&self) -> Self {
        match *self {
            NormSpec::Mixed { p, q, order } => NormSpec::Mixed { p: conjugate(p), q: conjugate(q), order },
            NormSpec::Lorentz { p, r } => NormSpec::Lorentz { p: conjugate(p), r: conjugate(r) },
            NormSpec::Schatten { alpha } => NormSpec::Schatten { alpha: conjugate(alpha) },
            NormSpec::Sequence { beta } => NormSpec::Sequence { beta: conjugate(beta) },
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            NormSpec::Mixed { p, q, .. } => {
                mixed::check_exponent("p", p)?;
                mixed::check_exponent("q", q)
            }
            NormSpec::Lorentz { p, r } => {
                mixed::check_exponent("p", p)?;
                mixed::check_exponent("r", r)
            }
            NormSpec::Schatten { alpha } => mixed::check_exponent("alpha", alpha),
            NormSpec::Sequence { beta } => mixed::check_exponent("beta", beta),
        }
    }
}

/// `(Σ_j |λ_j|^β)^{1/β}`; `β = ∞` gives `max |λ_j|`.
pub fn sequence_norm(lambda: &[f64], beta: f64) -> Result<f64> {
    mixed::check_exponent("beta", beta)?;
    Ok(weighted_lp(lambda.iter().copied(), std::iter::repeat(1.0), beta))
}
