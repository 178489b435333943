use serde::{Deserialize, Serialize};

use crate::experiments::{
    exponent_violations, CheckMode, DualityConfig, ExperimentConfig, Exponents, MaximalConfig, SystemRecipe,
    DUALITY_BUDGET,
};
use crate::randomization::RandomSeedPair;

/// The runnable experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Expsum,
    Kernel,
    Strichartz,
    Maximal,
    Converge,
    Randomize,
    Duality,
    All,
}

impl Experiment {
    pub const EACH: [Experiment; 7] = [
        Experiment::Expsum,
        Experiment::Kernel,
        Experiment::Strichartz,
        Experiment::Maximal,
        Experiment::Converge,
        Experiment::Randomize,
        Experiment::Duality,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Expsum => "expsum",
            Experiment::Kernel => "kernel",
            Experiment::Strichartz => "strichartz",
            Experiment::Maximal => "maximal",
            Experiment::Converge => "converge",
            Experiment::Randomize => "randomize",
            Experiment::Duality => "duality",
            Experiment::All => "all",
        }
    }

    /// The single experiments this one stands for.
    pub fn expand(&self) -> Vec<Experiment> {
        match self {
            Experiment::All => Self::EACH.to_vec(),
            e => vec![*e],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExpSumSection {
    pub n_list: Vec<i64>,
    /// Log-spaced times per `N` in `[N^{-3}, N^{-1}]`.
    pub t_count: usize,
    /// Points of `x ∈ [−1, 1]`.
    pub x_count: usize,
    pub max_spread: f64,
}

impl Default for ExpSumSection {
    fn default() -> Self {
        Self { n_list: vec![64, 256, 1024], t_count: 32, x_count: 257, max_spread: 4.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KernelSection {
    /// Weight exponent of `|ξ|^{−s}`.
    pub s: f64,
    pub ts: Vec<f64>,
    pub x_min: f64,
    pub x_max: f64,
    pub x_count: usize,
    pub max_spread: f64,
    pub step_tol: f64,
    pub trace_operators: usize,
    pub trace_times: Vec<f64>,
    pub trace_tol: f64,
    pub unitarity_tol: f64,
}

impl Default for KernelSection {
    fn default() -> Self {
        Self {
            s: 0.5,
            ts: vec![0.01, 0.1, 1.0],
            x_min: 0.05,
            x_max: 1.0,
            x_count: 64,
            max_spread: 4.0,
            step_tol: 1e-6,
            trace_operators: 100,
            trace_times: vec![0.0, 0.1, 1.0],
            trace_tol: 1e-8,
            unitarity_tol: 1e-10,
        }
    }
}

/// Exponents and eigenvalue exponents of one counterexample sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CounterexampleCase {
    pub p: f64,
    pub q: f64,
    pub betas: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StrichartzSection {
    pub p: f64,
    pub q: f64,
    pub beta: f64,
    pub mode: CheckMode,
    pub n_list: Vec<i64>,
    pub t_samples: usize,
    pub x_points_per_mode: usize,
    pub recipe: SystemRecipe,
    pub lambda: f64,
    pub systems_per_n: usize,
    /// Further space exponents on the admissible segment checked in bound mode.
    pub extra_q: Vec<f64>,
    pub max_spread: f64,
    pub slope_tol: f64,
    pub counterexample_t_samples: usize,
    pub counterexample: Vec<CounterexampleCase>,
}

impl Default for StrichartzSection {
    fn default() -> Self {
        let base = ExperimentConfig::default();
        Self {
            p: base.p,
            q: base.q,
            beta: base.beta,
            mode: base.mode,
            n_list: base.n_list,
            t_samples: base.t_samples,
            x_points_per_mode: base.x_points_per_mode,
            recipe: base.recipe,
            lambda: base.lambda,
            systems_per_n: base.systems_per_n,
            extra_q: vec![1.0, 4.0],
            max_spread: 4.0,
            slope_tol: 0.05,
            counterexample_t_samples: 8,
            counterexample: vec![
                CounterexampleCase { p: 4.0, q: 2.0, betas: vec![1.0, 4.0 / 3.0, 1.8] },
                CounterexampleCase { p: f64::INFINITY, q: 1.0, betas: vec![1.0, 1.5] },
                CounterexampleCase { p: 2.0, q: f64::INFINITY, betas: vec![1.5, 2.0, 3.0] },
            ],
        }
    }
}

impl StrichartzSection {
    pub fn experiment_config(&self, seeds: RandomSeedPair) -> ExperimentConfig {
        ExperimentConfig {
            p: self.p,
            q: self.q,
            beta: self.beta,
            n_list: self.n_list.clone(),
            t_samples: self.t_samples,
            x_points_per_mode: self.x_points_per_mode,
            recipe: self.recipe,
            lambda: self.lambda,
            systems_per_n: self.systems_per_n,
            seeds,
            mode: self.mode,
        }
    }

    /// The configured triple followed by the segment points at `extra_q`.
    pub fn triples(&self) -> Vec<Exponents> {
        let mut out = vec![Exponents { p: self.p, q: self.q, beta: self.beta }];
        if self.mode == CheckMode::Bound {
            out.extend(self.extra_q.iter().map(|&q| Exponents::on_segment(q)));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConvergeSection {
    /// Frequency band `|ξ| ≤ band` on the line.
    pub band: f64,
    pub rank: usize,
    /// Times `2^{−m}` for `m` from `m_min` to `m_max`.
    pub m_min: i32,
    pub m_max: i32,
    pub max_ratio: f64,
    pub monotone_tol: f64,
}

impl Default for ConvergeSection {
    fn default() -> Self {
        Self { band: 2.0, rank: 4, m_min: 2, m_max: 12, max_ratio: 0.01, monotone_tol: 0.05 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RandomizeSection {
    pub khinchin_terms: usize,
    pub khinchin_samples: usize,
    pub khinchin_tol: f64,
    pub geometries: Vec<String>,
    pub rank: usize,
    pub r: f64,
    pub samples: usize,
    pub m_min: i32,
    pub m_max: i32,
    pub max_ratio: f64,
    pub torus_points: usize,
    pub torus_band: f64,
    pub line_band: f64,
    pub ball_points: usize,
    pub ball_modes: usize,
}

impl Default for RandomizeSection {
    fn default() -> Self {
        Self {
            khinchin_terms: 16,
            khinchin_samples: 10_000,
            khinchin_tol: 0.05,
            geometries: vec!["torus".into(), "line".into(), "ball".into()],
            rank: 4,
            r: 2.0,
            samples: 1000,
            m_min: 2,
            m_max: 12,
            max_ratio: 0.1,
            torus_points: 64,
            torus_band: 3.0,
            line_band: 2.0,
            ball_points: 128,
            ball_modes: 4,
        }
    }
}

/// Everything a run needs; every field has a default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LabConfig {
    /// Seed of the function randomization and of system construction.
    pub seed: u64,
    /// Seed of the eigenvalue randomization.
    pub seed2: u64,
    pub expsum: ExpSumSection,
    pub kernel: KernelSection,
    pub strichartz: StrichartzSection,
    pub maximal: MaximalConfig,
    pub converge: ConvergeSection,
    pub randomize: RandomizeSection,
    pub duality: DualityConfig,
}

impl Default for LabConfig {
    fn default() -> Self {
        Self {
            seed: 7,
            seed2: 11,
            expsum: ExpSumSection::default(),
            kernel: KernelSection::default(),
            strichartz: StrichartzSection::default(),
            maximal: MaximalConfig::default(),
            converge: ConvergeSection::default(),
            randomize: RandomizeSection::default(),
            duality: DualityConfig::default(),
        }
    }
}

impl LabConfig {
    pub fn seeds(&self) -> RandomSeedPair {
        RandomSeedPair::new(self.seed, self.seed2)
    }

    /// Violations relevant to one experiment (all of them for `All`).
    pub fn violations_for(&self, experiment: Experiment) -> Vec<String> {
        experiment.expand().into_iter().flat_map(|e| self.section_violations(e)).collect()
    }

    fn section_violations(&self, experiment: Experiment) -> Vec<String> {
        let mut out = Vec::new();
        let mut need = |ok: bool, msg: String| {
            if !ok {
                out.push(msg);
            }
        };
        match experiment {
            Experiment::Expsum => {
                let s = &self.expsum;
                need(s.n_list.iter().all(|&n| n >= 1), "N must be ≥ 1".into());
                need(!s.n_list.is_empty(), "expsum.n_list is empty".into());
                need(s.t_count >= 1 && s.x_count >= 1, "expsum needs t_count ≥ 1 and x_count ≥ 1".into());
            }
            Experiment::Kernel => {
                let s = &self.kernel;
                need(s.s < 1.0, format!("kernel.s = {} must be below 1", s.s));
                need(s.ts.iter().all(|t| *t != 0.0 && t.abs() <= 1.0), "kernel.ts must satisfy 0 < |t| ≤ 1".into());
                need(s.x_min > 0.0 && s.x_max >= s.x_min, "kernel needs 0 < x_min ≤ x_max".into());
                need(s.x_count >= 1 && !s.ts.is_empty(), "kernel needs samples in t and x".into());
                need(s.trace_operators >= 1, "kernel.trace_operators must be ≥ 1".into());
            }
            Experiment::Strichartz => {
                let s = &self.strichartz;
                out.extend(s.experiment_config(self.seeds()).violations());
                for &q in &s.extra_q {
                    if !(q >= 1.0) {
                        out.push(format!("strichartz.extra_q entry {q} must lie in [1, ∞]"));
                    }
                }
                for c in &s.counterexample {
                    let e = Exponents { p: c.p, q: c.q, beta: c.betas.first().copied().unwrap_or(1.0) };
                    out.extend(exponent_violations(&e, CheckMode::Counterexample));
                    if c.betas.is_empty() || c.betas.iter().any(|b| !(*b >= 1.0)) {
                        out.push("counterexample betas must be nonempty and ≥ 1".into());
                    }
                }
            }
            Experiment::Maximal => {
                let s = &self.maximal;
                if s.mode == CheckMode::Bound && !(s.beta < 2.0) {
                    out.push(format!("β = {} must be below 2 for the maximal-in-time bound", s.beta));
                }
                if !(s.beta >= 1.0) {
                    out.push(format!("β = {} must lie in [1, ∞]", s.beta));
                }
                if s.ranks.is_empty() || s.ranks.contains(&0) || s.trials == 0 {
                    out.push("maximal needs positive ranks and at least one trial".into());
                }
                if !(s.band > 0.0) || s.t_samples < 2 || !(s.t_end > 0.0) {
                    out.push("maximal needs band > 0, t_end > 0 and t_samples ≥ 2".into());
                }
            }
            Experiment::Converge => {
                let s = &self.converge;
                if !(s.band > 0.0) || s.rank == 0 || s.m_min >= s.m_max {
                    out.push("converge needs band > 0, rank ≥ 1 and m_min < m_max".into());
                }
            }
            Experiment::Randomize => {
                let s = &self.randomize;
                if !(s.r >= 2.0 && s.r.is_finite()) {
                    out.push(format!("r = {} must lie in [2, ∞)", s.r));
                }
                if s.samples == 0 || s.khinchin_samples == 0 || s.khinchin_terms == 0 || s.rank == 0 {
                    out.push("randomize needs positive sample counts, terms and rank".into());
                }
                for g in &s.geometries {
                    if !["torus", "line", "ball"].contains(&g.as_str()) {
                        out.push(format!("unknown geometry {g:?}: expected torus, line or ball"));
                    }
                }
                if s.rank > s.ball_modes && s.geometries.iter().any(|g| g == "ball") {
                    out.push(format!("rank {} exceeds the {} ball modes", s.rank, s.ball_modes));
                }
                if s.m_min >= s.m_max {
                    out.push("randomize needs m_min < m_max".into());
                }
            }
            Experiment::Duality => {
                let s = &self.duality;
                for (name, v) in [("p", s.p), ("q", s.q), ("β", s.beta)] {
                    if !(v >= 1.0) {
                        out.push(format!("{name} = {v} must lie in [1, ∞]"));
                    }
                }
                if 2 * s.cutoff + 1 > s.n_x {
                    out.push(format!("duality cutoff {} needs 2N+1 ≤ n_x = {}", s.cutoff, s.n_x));
                }
                if s.n_x * s.t_samples * (2 * s.cutoff + 1) > DUALITY_BUDGET {
                    out.push(format!("duality lattice exceeds the {DUALITY_BUDGET}-entry matrix budget"));
                }
                if s.batch == 0 || s.t_samples == 0 {
                    out.push("duality needs batch ≥ 1 and t_samples ≥ 1".into());
                }
            }
            Experiment::All => unreachable!("expanded above"),
        }
        out
    }
}

/// Every violation in the configuration; empty means every experiment can run.
pub fn validate_config(cfg: &LabConfig) -> Vec<String> {
    cfg.violations_for(Experiment::All)
}

/// Sets `a.b.c = value` in a parsed document; `value` is read as a TOML
/// value and falls back to a bare string.
pub fn apply_override(doc: &mut toml::Table, assignment: &str) -> Result<(), String> {
    let (path, raw) =
        assignment.split_once('=').ok_or_else(|| format!("override {assignment:?} is not of the form key=value"))?;
    let value = match format!("v = {}", raw.trim()).parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").expect("parsed key"),
        Err(_) => toml::Value::String(raw.trim().to_string()),
    };
    let keys: Vec<&str> = path.trim().split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(format!("override key {path:?} is malformed"));
    }
    let mut table = doc;
    for k in &keys[..keys.len() - 1] {
        let entry = table.entry(k.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        table = entry.as_table_mut().ok_or_else(|| format!("override key {path:?}: {k} is not a table"))?;
    }
    table.insert(keys[keys.len() - 1].to_string(), value);
    Ok(())
}

/// Parses a configuration document after applying overrides.
pub fn parse_config(text: &str, overrides: &[String]) -> Result<LabConfig, String> {
    // the file alone first, so errors carry its line and column
    toml::from_str::<LabConfig>(text).map_err(|e| format!("config: {e}"))?;
    let mut doc: toml::Table = text.parse().map_err(|e: toml::de::Error| format!("config: {e}"))?;
    for o in overrides {
        apply_override(&mut doc, o)?;
    }
    LabConfig::deserialize(doc).map_err(|e| format!("config after overrides: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        assert!(validate_config(&LabConfig::default()).is_empty());
        let parsed = parse_config("", &[]).unwrap();
        assert_eq!(parsed, LabConfig::default());
    }

    #[test]
    fn named_violations() {
        let cfg = parse_config("[strichartz]\np = inf\nq = 1.0\nbeta = 3.0\n", &[]).unwrap();
        assert_eq!(validate_config(&cfg), vec!["β exceeds 2q/(q+1)=1".to_string()]);
        let cfg = parse_config("[expsum]\nn_list = [-4, 64]\n", &[]).unwrap();
        assert_eq!(validate_config(&cfg), vec!["N must be ≥ 1".to_string()]);
        let cfg = parse_config("", &["maximal.beta=2.5".into()]).unwrap();
        assert_eq!(cfg.violations_for(Experiment::Maximal).len(), 1);
        assert!(cfg.violations_for(Experiment::Expsum).is_empty());
    }

    #[test]
    fn overrides_and_diagnostics() {
        let cfg =
            parse_config("seed = 3\n", &["strichartz.recipe.kind=counterexample".into(), "seed2=5".into()]).unwrap();
        assert_eq!((cfg.seed, cfg.seed2), (3, 5));
        assert_eq!(cfg.strichartz.recipe, SystemRecipe::Counterexample);
        let err = parse_config("[kernel]\nwidth = 3\n", &[]).unwrap_err();
        assert!(err.contains("width") && err.contains("line 2"), "{err}");
        assert!(parse_config("", &["nonsense".into()]).is_err());
        assert!(parse_config("", &["seed.x=1".into()]).is_err());
    }
}
