//! Experiment configuration as read from TOML.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use zsbc::problems::ProblemSpec;
use zsbc::solvers::{BcdVariant, Lipschitz};

use crate::BenchError;

/// A parameter that is either given or derived from the matching corollary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    Corollary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FloatParam {
    Rule(Rule),
    Constant(f64),
    List(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CountParam {
    Rule(Rule),
    Constant(usize),
    List(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarParam {
    Rule(Rule),
    Value(f64),
}

/// Constants the schedules need but the problem may not know.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantOverrides {
    #[serde(rename = "M", default)]
    pub m: Option<f64>,
    #[serde(default)]
    pub sigma: Option<f64>,
    #[serde(rename = "D_tilde", default)]
    pub d_tilde: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    pub algo: String,
    /// Iteration limit; derived from `budget` when absent.
    #[serde(rename = "T", default)]
    pub iterations: Option<usize>,
    #[serde(default = "corollary_float")]
    pub stepsizes: FloatParam,
    #[serde(default)]
    pub batch_sizes: Option<CountParam>,
    #[serde(default)]
    pub block_probs: Option<Vec<f64>>,
    #[serde(default = "corollary_scalar")]
    pub mu: ScalarParam,
    #[serde(default)]
    pub delta_k: Option<FloatParam>,
    /// Call budget `T~` for the budget rules.
    #[serde(default)]
    pub budget: Option<u64>,
    #[serde(default)]
    pub bcd_variant: BcdVariant,
    /// Replaces the problem's own constants.
    #[serde(default)]
    pub lipschitz: Option<Lipschitz>,
    #[serde(default)]
    pub max_inner: Option<usize>,
    #[serde(default)]
    pub bounds: ConstantOverrides,
}

fn corollary_float() -> FloatParam {
    FloatParam::Rule(Rule::Corollary)
}

fn corollary_scalar() -> ScalarParam {
    ScalarParam::Rule(Rule::Corollary)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoPhaseSpec {
    /// `S`; from `Lambda` when absent.
    #[serde(rename = "S", default)]
    pub runs: Option<usize>,
    /// Post-optimization sample size; from `epsilon` and `Lambda` when absent.
    #[serde(default)]
    pub post_samples: Option<usize>,
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(rename = "Lambda", default)]
    pub confidence: Option<f64>,
    /// Free parameter of the probability estimates, used only for bound values.
    #[serde(default)]
    pub lambda: Option<f64>,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "one")]
    pub replications: usize,
    #[serde(default)]
    pub master_seed: u64,
    /// Metric names; a per-algorithm default when empty.
    #[serde(default)]
    pub metrics: Vec<String>,
    /// Bound identifiers to compare against; a per-algorithm default when empty.
    #[serde(default)]
    pub compare: Vec<String>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    pub problem: ProblemSpec,
    pub solver: SolverSpec,
    #[serde(default)]
    pub two_phase: Option<TwoPhaseSpec>,
}

impl ExperimentConfig {
    pub fn parse(src: &str) -> Result<Self, BenchError> {
        toml::from_str(src).map_err(|e| BenchError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<(Self, String), BenchError> {
        let src = std::fs::read_to_string(path)
            .map_err(|e| BenchError::Config(format!("cannot read {}: {e}", path.display())))?;
        let cfg = Self::parse(&src).map_err(|e| match e {
            BenchError::Config(m) => BenchError::Config(format!("{}: {m}", path.display())),
            other => other,
        })?;
        Ok((cfg, src))
    }
}

/// 1-based line of `key = ...` inside `[section]` (or the top level when
/// `section` is empty), for messages about values that parsed but are invalid.
pub fn locate(src: &str, section: &str, key: &str) -> Option<usize> {
    let mut current = String::new();
    for (i, line) in src.lines().enumerate() {
        let t = line.trim();
        if let Some(rest) = t.strip_prefix('[') {
            current = rest.trim_end_matches(']').trim().to_string();
            continue;
        }
        let Some((k, _)) = t.split_once('=') else { continue };
        if current == section && k.trim() == key {
            return Some(i + 1);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
master_seed = 3

[problem]
name = "quadratic"
n = 10
blocks = 2

[solver]
algo = "zs_bcd"
T = 10
"#;

    #[test]
    fn defaults_fill_in() {
        let c = ExperimentConfig::parse(MINIMAL).unwrap();
        assert_eq!(c.replications, 1);
        assert_eq!(c.solver.stepsizes, FloatParam::Rule(Rule::Corollary));
        assert_eq!(c.solver.mu, ScalarParam::Rule(Rule::Corollary));
        assert!(c.two_phase.is_none());
    }

    #[test]
    fn schedules_accept_numbers_lists_and_rules() {
        let src = MINIMAL.replace("T = 10", "T = 3\nstepsizes = [0.1, 0.2, 1]\nbatch_sizes = 4\nmu = 0.01");
        let c = ExperimentConfig::parse(&src).unwrap();
        assert_eq!(c.solver.stepsizes, FloatParam::List(vec![0.1, 0.2, 1.0]));
        assert_eq!(c.solver.batch_sizes, Some(CountParam::Constant(4)));
        assert_eq!(c.solver.mu, ScalarParam::Value(0.01));
        let src = MINIMAL.replace("T = 10", "T = 3\nstepsizes = 1");
        assert_eq!(ExperimentConfig::parse(&src).unwrap().solver.stepsizes, FloatParam::Constant(1.0));
    }

    #[test]
    fn parse_errors_carry_a_line() {
        let src = MINIMAL.replace("T = 10", "T = 10\ncolour = 1");
        let msg = ExperimentConfig::parse(&src).unwrap_err().to_string();
        assert!(msg.contains("line 12"), "{msg}");
        assert!(msg.contains("colour"), "{msg}");
    }

    #[test]
    fn locate_finds_keys_by_section() {
        assert_eq!(locate(MINIMAL, "solver", "T"), Some(11));
        assert_eq!(locate(MINIMAL, "", "master_seed"), Some(2));
        assert_eq!(locate(MINIMAL, "problem", "T"), None);
    }
}
