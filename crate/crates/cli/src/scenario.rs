//! Scenario files: the JSON schema driving an experiment run.
//!
//! Unknown keys are errors, not warnings: a silently ignored option could
//! poison an oracle comparison.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub complex: ComplexSpec,
    /// One or two metric specs; isomorphism tasks need two.
    pub metrics: Vec<MetricSpec>,
    pub tasks: Vec<Task>,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Output directory; the CLI `--out` flag overrides it.
    #[serde(default)]
    pub output: Option<String>,
    /// Parameters for the refinement task.
    #[serde(default)]
    pub refine: Option<RefineSpec>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexSpec {
    /// Named fixture: path_2, cycle_<n>, octahedron, ball_cone_octahedron,
    /// torus_triangulated.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixture: Option<String>,
    /// Plain-text top-simplex file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cubical: Option<CubicalSpec>,
    /// Boundary subcomplex deleted for relative cohomology.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<BoundarySpec>,
    /// Scalar local system twisting the coboundary.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub local_system: Option<LocalSystemSpec>,
    /// Additive magnet perturbation, certified before use.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub magnet: Option<MagnetSpec>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CubicalSpec {
    pub sizes: Vec<usize>,
    pub periodic: Vec<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spacing: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct BoundarySpec {
    /// "octahedron_surface" marks the base of the coned octahedron.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub named: Option<String>,
    /// Explicit top simplices of the marked subcomplex (faces are closed
    /// automatically).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simplices: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct LocalSystemSpec {
    /// One `[re, im]` transport per edge, in lexicographic edge order.
    pub scalars: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MagnetSpec {
    /// Cup product with the closed 1-cochain d₀(potential); the runtime
    /// square-zero gate decides whether it is admissible.
    pub cup_potential: Vec<f64>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MetricSpec {
    pub model: MetricModel,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_c_max")]
    pub c_max: f64,
    /// Series truncation for the weierstrass model.
    #[serde(default = "default_terms")]
    pub terms: usize,
    /// Textual metric-field file for the explicit model.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
}

fn default_c_max() -> f64 {
    4.0
}

fn default_terms() -> usize {
    24
}

impl MetricSpec {
    pub fn identity() -> Self {
        Self {
            model: MetricModel::Identity,
            seed: 0,
            c_max: 1.0,
            terms: default_terms(),
            file: None,
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum MetricModel {
    Identity,
    Random,
    Weierstrass,
    Explicit,
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Betti,
    Decompose,
    Isomorphism,
    GradedIsomorphism,
    PowerCheck,
    RefineDivergence,
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::Betti => "betti",
            Task::Decompose => "decompose",
            Task::Isomorphism => "isomorphism",
            Task::GradedIsomorphism => "graded_isomorphism",
            Task::PowerCheck => "power_check",
            Task::RefineDivergence => "refine_divergence",
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Required ratio across a rank cut.
    pub rank_gap: f64,
    /// Residual budget for orthogonality / self-adjointness checks.
    pub residual: f64,
    /// Budget for `‖ΦΦ⁻¹ − I‖`.
    pub isomorphism: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank_gap: 1e3,
            residual: 1e-10,
            isomorphism: 1e-8,
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RefineSpec {
    /// Coarsest grid resolution.
    #[serde(default = "default_base")]
    pub base: usize,
    /// Number of dyadic levels.
    #[serde(default = "default_levels")]
    pub levels: usize,
    /// "weierstrass" or "smooth" (the constant control diag(2,1)).
    pub model: RefineModel,
}

fn default_base() -> usize {
    32
}

fn default_levels() -> usize {
    4
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum RefineModel {
    Weierstrass,
    Smooth,
}

/// Parse and structurally validate a scenario.
pub fn parse_scenario(text: &str) -> Result<Scenario, String> {
    let scenario: Scenario =
        serde_json::from_str(text).map_err(|e| format!("scenario parse error: {e}"))?;
    validate(&scenario)?;
    Ok(scenario)
}

fn validate(s: &Scenario) -> Result<(), String> {
    if s.tasks.is_empty() {
        return Err("scenario lists no tasks".into());
    }
    if s.metrics.is_empty() && !matches!(s.tasks.as_slice(), [Task::RefineDivergence]) {
        return Err("scenario lists no metrics".into());
    }
    let sources = [
        s.complex.fixture.is_some(),
        s.complex.file.is_some(),
        s.complex.cubical.is_some(),
    ]
    .iter()
    .filter(|&&b| b)
    .count();
    if sources != 1 && !matches!(s.tasks.as_slice(), [Task::RefineDivergence]) {
        return Err("complex must name exactly one of fixture, file, cubical".into());
    }
    for task in &s.tasks {
        match task {
            Task::Isomorphism | Task::GradedIsomorphism => {
                if s.metrics.len() != 2 {
                    return Err(format!(
                        "task {} requires exactly two metric specs",
                        task.name()
                    ));
                }
            }
            Task::RefineDivergence => {
                if s.refine.is_none() {
                    return Err("refine_divergence requires a refine block".into());
                }
            }
            _ => {}
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_scenario_parses() {
        let s = parse_scenario(
            r#"{
                "complex": {"fixture": "octahedron"},
                "metrics": [{"model": "identity"}],
                "tasks": ["betti"]
            }"#,
        )
        .unwrap();
        assert_eq!(s.tasks, vec![Task::Betti]);
        assert_eq!(s.tolerances.rank_gap, 1e3);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = parse_scenario(
            r#"{
                "complex": {"fixture": "octahedron"},
                "metrics": [{"model": "identity"}],
                "tasks": ["betti"],
                "typo_field": 1
            }"#,
        )
        .unwrap_err();
        assert!(err.contains("typo_field"), "{err}");
    }

    #[test]
    fn isomorphism_needs_two_metrics() {
        let err = parse_scenario(
            r#"{
                "complex": {"fixture": "cycle_3"},
                "metrics": [{"model": "identity"}],
                "tasks": ["isomorphism"]
            }"#,
        )
        .unwrap_err();
        assert!(err.contains("two metric"), "{err}");
    }

    #[test]
    fn empty_tasks_rejected() {
        let err = parse_scenario(
            r#"{
                "complex": {"fixture": "cycle_3"},
                "metrics": [{"model": "identity"}],
                "tasks": []
            }"#,
        )
        .unwrap_err();
        assert!(err.contains("no tasks"), "{err}");
    }
}
