use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::randomization::RandomSeedPair;

/// Exponents of a Strichartz-type estimate: time `p`, space `q`, eigenvalue `β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Exponents {
    pub p: f64,
    pub q: f64,
    pub beta: f64,
}

impl Exponents {
    /// The point of the segment `(A, B]` with space exponent `q`, at the largest admissible `β`.
    pub fn on_segment(q: f64) -> Self {
        let inv_p = (1.0 - 1.0 / q) / 2.0;
        Self { p: 1.0 / inv_p, q, beta: beta_endpoint(q) }
    }

    pub fn with_beta(self, beta: f64) -> Self {
        Self { beta, ..self }
    }
}

/// `2q/(q+1)`, the largest `β` allowed at space exponent `q` (2 at `q = ∞`).
pub fn beta_endpoint(q: f64) -> f64 {
    if q.is_infinite() {
        2.0
    } else {
        2.0 * q / (q + 1.0)
    }
}

/// Whether the run checks an upper bound (hypotheses enforced) or exhibits a counterexample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckMode {
    #[default]
    Bound,
    Counterexample,
}

/// How the orthonormal system at frequency cutoff `N` is built.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SystemRecipe {
    /// Gaussian coefficients on `|k| ≤ N`, orthonormalized, of fixed rank.
    Random { rank: usize },
    /// As `Random` with rank `max(1, N / divisor)`.
    RandomProportional { divisor: usize },
    /// The plane waves `e^{ijx}`, `|j| ≤ N`, with `λ_j = 1/(2π)`.
    Counterexample,
    /// One normalized plane wave.
    SingleMode { k: i64 },
}

impl SystemRecipe {
    pub fn rank(&self, n: usize) -> usize {
        match *self {
            SystemRecipe::Random { rank } => rank,
            SystemRecipe::RandomProportional { divisor } => (n / divisor.max(1)).max(1),
            SystemRecipe::Counterexample => 2 * n + 1,
            SystemRecipe::SingleMode { .. } => 1,
        }
    }
}

/// Hypotheses and sampling of a torus Strichartz experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Time exponent.
    pub p: f64,
    /// Space exponent.
    pub q: f64,
    pub beta: f64,
    /// Frequency cutoffs; signed so that invalid input can be reported rather than rejected by the parser.
    pub n_list: Vec<i64>,
    pub t_samples: usize,
    /// Spatial points per unit of `N`, rounded up to a power of two.
    pub x_points_per_mode: usize,
    pub recipe: SystemRecipe,
    /// Common value of the eigenvalues for random and single-mode systems.
    pub lambda: f64,
    /// Independent random systems per `N`.
    pub systems_per_n: usize,
    /// Set in code; configuration files carry seeds at the top level.
    #[serde(skip)]
    pub seeds: RandomSeedPair,
    pub mode: CheckMode,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let e = Exponents::on_segment(2.0);
        Self {
            p: e.p,
            q: e.q,
            beta: e.beta,
            n_list: vec![64, 128, 256, 512, 1024],
            t_samples: 64,
            x_points_per_mode: 4,
            recipe: SystemRecipe::RandomProportional { divisor: 8 },
            lambda: 1.0,
            systems_per_n: 20,
            seeds: RandomSeedPair::new(7, 11),
            mode: CheckMode::Bound,
        }
    }
}

/// Violations of the hypotheses of the torus Strichartz bounds.
///
/// Finite `q` must sit on the segment `(A, B]`, `A = (0, 1/2)`, `B = (1, 0)`:
/// `1/q ∈ (0, 1]` with `2/p + 1/q = 1` and `β ≤ 2q/(q+1)`. The excluded
/// endpoint `A` is the separate `L²_t L^∞_x` estimate, which needs `β ≤ 2`.
pub fn exponent_violations(e: &Exponents, mode: CheckMode) -> Vec<String> {
    let mut out = Vec::new();
    for (name, v) in [("p", e.p), ("q", e.q), ("β", e.beta)] {
        if v.is_nan() || v < 1.0 {
            out.push(format!("{name} = {v} must lie in [1, ∞]"));
        }
    }
    if !out.is_empty() || mode == CheckMode::Counterexample {
        return out;
    }
    if e.q.is_infinite() {
        if e.p != 2.0 {
            out.push(format!("q = ∞ requires p = 2, got p = {}", e.p));
        }
        if e.beta > 2.0 {
            out.push("β exceeds 2 for the L²_t L^∞_x bound".to_string());
        }
        return out;
    }
    let relation = 2.0 / e.p + 1.0 / e.q;
    if (relation - 1.0).abs() > 1e-12 {
        out.push(format!("(1/q, 1/p) = ({}, {}) is off the segment (A,B]: need 2/p + 1/q = 1", 1.0 / e.q, 1.0 / e.p));
    }
    let cap = beta_endpoint(e.q);
    if e.beta > cap * (1.0 + 1e-12) {
        out.push(format!("β exceeds 2q/(q+1)={cap}"));
    }
    out
}

impl ExperimentConfig {
    pub fn exponents(&self) -> Exponents {
        Exponents { p: self.p, q: self.q, beta: self.beta }
    }

    pub fn with_exponents(mut self, e: Exponents) -> Self {
        self.p = e.p;
        self.q = e.q;
        self.beta = e.beta;
        self
    }

    pub fn violations(&self) -> Vec<String> {
        let mut out = exponent_violations(&self.exponents(), self.mode);
        if self.n_list.iter().any(|&n| n < 1) {
            out.push("N must be ≥ 1".to_string());
        }
        if self.n_list.len() < 3 {
            out.push(format!("N list needs at least 3 values for a scaling fit, got {}", self.n_list.len()));
        }
        if self.t_samples == 0 {
            out.push("t_samples must be ≥ 1".to_string());
        }
        if self.x_points_per_mode < 3 {
            out.push("x_points_per_mode must be ≥ 3 to resolve |k| ≤ N".to_string());
        }
        if self.systems_per_n == 0 {
            out.push("systems_per_n must be ≥ 1".to_string());
        }
        if !self.lambda.is_finite() || self.lambda < 0.0 {
            out.push(format!("λ = {} must be finite and nonnegative", self.lambda));
        }
        match self.recipe {
            SystemRecipe::Random { rank: 0 } => out.push("rank must be ≥ 1".to_string()),
            SystemRecipe::RandomProportional { divisor: 0 } => out.push("rank divisor must be ≥ 1".to_string()),
            SystemRecipe::SingleMode { k } => {
                if let Some(&n) = self.n_list.iter().min() {
                    if k.abs() > n {
                        out.push(format!("single mode k = {k} exceeds the smallest cutoff N = {n}"));
                    }
                }
            }
            _ => {}
        }
        for &n in &self.n_list {
            if n >= 1 && self.recipe.rank(n as usize) > 2 * n as usize + 1 {
                out.push(format!(
                    "rank {} exceeds the 2N+1 = {} available modes",
                    self.recipe.rank(n as usize),
                    2 * n + 1
                ));
                break;
            }
        }
        out
    }

    /// The cutoffs as `usize`, after validation.
    pub fn cutoffs(&self) -> Result<Vec<usize>> {
        let v = self.violations();
        if !v.is_empty() {
            return Err(LabError::Inadmissible(v.join("; ")));
        }
        Ok(self.n_list.iter().map(|&n| n as usize).collect())
    }

    /// Torus points for cutoff `N`: a power of two at least `x_points_per_mode · N`.
    pub fn x_points(&self, n: usize) -> usize {
        (self.x_points_per_mode * n).max(8).next_power_of_two()
    }
}
