//! Named experiment pipelines: an ordered list of steps with declared
//! expectations, run deterministically from one seed.

mod builtin;
mod export;
mod lemmas;
mod steps;

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use builtin::{builtin, builtin_names};
pub use export::{export_report, export_space, glued_plotdata, packing_csv, ExportFormat};
pub use lemmas::{check_ball_in_inner_region, check_exhaustion, check_hausdorff_balls, check_packing_covering};
pub use steps::{Check, SpaceSpec, Step, StepReport, TowerSpec};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot parse scenario: {0}")]
    ScenarioParse(String),
    #[error("no builtin scenario named {0:?}")]
    UnknownBuiltin(String),
    #[error("step {index}: invalid parameters: {reason}")]
    InvalidStep { index: usize, reason: String },
    #[error("step {index} failed: {message}")]
    StepFailure { index: usize, message: String },
    #[error("i/o: {0}")]
    Io(String),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    /// One-line description carried into the report.
    #[serde(default)]
    pub about: String,
    #[serde(default)]
    pub steps: Vec<Step>,
    /// Report files written after the run; `.csv` gets the step summary,
    /// anything else the JSON report.
    #[serde(default)]
    pub outputs: Vec<PathBuf>,
    #[serde(default)]
    pub seed: u64,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        serde_json::from_str(text).map_err(|e| ScenarioError::ScenarioParse(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ScenarioError> {
        let text = std::fs::read_to_string(path.as_ref()).map_err(|e| ScenarioError::Io(e.to_string()))?;
        Self::from_json(&text)
    }

    /// Checks every step's parameters without running anything.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        for (index, step) in self.steps.iter().enumerate() {
            step.validate().map_err(|reason| ScenarioError::InvalidStep { index, reason })?;
            if let Step::Gh { upper_at_most_step: Some(k), .. } = step {
                if *k >= index || !matches!(self.steps[*k], Step::Gh { .. }) {
                    return Err(ScenarioError::InvalidStep {
                        index,
                        reason: format!("step {k} is not an earlier gh step"),
                    });
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub about: String,
    pub version: String,
    pub seed: u64,
    pub passed: bool,
    pub steps: Vec<StepReport>,
    /// Wall-clock seconds per step; not serialized so reports stay
    /// byte-identical across runs.
    #[serde(skip)]
    pub timing: Vec<f64>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Validates, then runs the steps in order and writes the declared outputs.
pub fn run(scenario: &Scenario) -> Result<Report, ScenarioError> {
    scenario.validate()?;
    let mut steps: Vec<StepReport> = Vec::with_capacity(scenario.steps.len());
    let mut timing = Vec::with_capacity(scenario.steps.len());
    for (index, step) in scenario.steps.iter().enumerate() {
        let t = Instant::now();
        let report = steps::execute(step, index, scenario.seed, &steps)
            .map_err(|message| ScenarioError::StepFailure { index, message })?;
        timing.push(t.elapsed().as_secs_f64());
        steps.push(report);
    }
    let report = Report {
        scenario: scenario.name.clone(),
        about: scenario.about.clone(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: scenario.seed,
        passed: steps.iter().all(|s| s.passed),
        steps,
        timing,
    };
    for out in &scenario.outputs {
        let format = if out.extension().is_some_and(|e| e == "csv") { ExportFormat::Csv } else { ExportFormat::Json };
        let text = export_report(&report, format).map_err(|e| ScenarioError::Io(e.to_string()))?;
        std::fs::write(out, text).map_err(|e| ScenarioError::Io(format!("{}: {e}", out.display())))?;
    }
    Ok(report)
}

/// Runs a builtin by name, or a scenario file when no builtin matches.
pub fn run_named(name_or_path: &str, seed: Option<u64>) -> Result<Report, ScenarioError> {
    let mut scenario = match builtin(name_or_path) {
        Some(s) => s,
        None if Path::new(name_or_path).exists() => Scenario::load(name_or_path)?,
        None => return Err(ScenarioError::UnknownBuiltin(name_or_path.to_string())),
    };
    if let Some(seed) = seed {
        scenario.seed = seed;
    }
    run(&scenario)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_scenario_passes() {
        let s = Scenario::from_json(r#"{"name": "empty"}"#).unwrap();
        let r = run(&s).unwrap();
        assert!(r.passed && r.steps.is_empty());
        assert_eq!(r.scenario, "empty");
    }

    #[test]
    fn parse_errors_are_reported() {
        assert!(matches!(Scenario::from_json("{"), Err(ScenarioError::ScenarioParse(_))));
        let bad = r#"{"name": "x", "steps": [{"op": "no_such_op"}]}"#;
        assert!(matches!(Scenario::from_json(bad), Err(ScenarioError::ScenarioParse(_))));
    }

    #[test]
    fn invalid_parameters_fail_before_running() {
        let s = Scenario::from_json(
            r#"{"name": "x", "steps": [
                {"op": "gh_sandwich", "pairs": 3},
                {"op": "packing", "space": {"family": "two_balls"}, "epsilon": -1}
            ]}"#,
        )
        .unwrap();
        assert!(matches!(run(&s), Err(ScenarioError::InvalidStep { index: 1, .. })));
    }

    #[test]
    fn failing_expectation_marks_the_report() {
        let s = Scenario::from_json(
            r#"{"name": "x", "steps": [
                {"op": "area", "space": {"family": "annulus", "r1": 1, "r2": 2, "plan": {"h": 0.1, "connect_radius": 0.22, "seed": 0, "boundary_h": 0.05}}, "max_rel_err": 1e-9}
            ]}"#,
        )
        .unwrap();
        let r = run(&s).unwrap();
        assert!(!r.passed);
        assert!(!r.steps[0].checks[0].passed);
    }

    #[test]
    fn step_failure_carries_its_index() {
        let s = Scenario::from_json(
            r#"{"name": "x", "steps": [
                {"op": "gh_sandwich", "pairs": 2},
                {"op": "probe", "space": {"family": "two_balls"}, "delta": 0.5, "p": [40, 0], "q": [0, 0]}
            ]}"#,
        )
        .unwrap();
        assert!(matches!(run(&s), Err(ScenarioError::StepFailure { index: 1, .. })));
    }

    #[test]
    fn reports_are_reproducible_and_written() {
        let dir = tempfile::tempdir().unwrap();
        let json = dir.path().join("r.json");
        let csv = dir.path().join("r.csv");
        let mut s = builtin("gh-sandwich").unwrap();
        s.outputs = vec![json.clone(), csv.clone()];
        let a = run(&s).unwrap();
        let first = std::fs::read_to_string(&json).unwrap();
        let b = run(&s).unwrap();
        assert!(a.passed);
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(first, std::fs::read_to_string(&json).unwrap());
        assert!(std::fs::read_to_string(&csv).unwrap().starts_with("index,op,passed"));
    }

    #[test]
    fn unknown_builtin() {
        assert!(matches!(run_named("no-such-scenario", None), Err(ScenarioError::UnknownBuiltin(_))));
    }
}
