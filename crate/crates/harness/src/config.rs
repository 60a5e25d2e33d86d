//! Experiment configuration: one JSON file plus command-line overrides.

use csf_core::families::{Family, FamilySpec};
use csf_core::solver::SolverConfig;
use serde::{Deserialize, Serialize};

use crate::HarnessError;

fn default_n_points() -> usize {
    1000
}
fn default_k_cap() -> f64 {
    1e6
}
fn default_dt_min() -> f64 {
    1e-9
}
fn default_dt_max() -> f64 {
    1e-4
}
fn default_snapshot_stride() -> usize {
    100
}
fn default_max_steps() -> usize {
    2_000_000
}
fn default_bisect_tol() -> f64 {
    1e-3
}

/// Everything a run, bisection or analysis needs. Serialized as the
/// experiment's JSON config file.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// One of `circle`, `ellipse`, `figure_eight`, `l_lambda`,
    /// `m_lambda`, `trig_three_loop`.
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default = "default_n_points")]
    pub n_points: usize,
    /// Radius for the circle family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    /// Semi-axes for the ellipse family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub semi_axes: Option<[f64; 2]>,
    #[serde(default = "default_k_cap")]
    pub k_cap: f64,
    #[serde(default = "default_dt_min")]
    pub dt_min: f64,
    #[serde(default = "default_dt_max")]
    pub dt_max: f64,
    #[serde(default = "default_snapshot_stride")]
    pub snapshot_stride: usize,
    #[serde(default = "default_max_steps")]
    pub max_steps: usize,
    /// `[lo, hi]` bracket for `bisect`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_interval: Option<[f64; 2]>,
    #[serde(default = "default_bisect_tol")]
    pub bisect_tol: f64,
    /// Loop count the classifier expects; derived from the family when
    /// absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_n: Option<usize>,
    /// Absolute shrink threshold; defaults to 5% of the initial curve
    /// diameter.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shrink_eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<String>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            family: "trig_three_loop".into(),
            lambda: None,
            n_points: default_n_points(),
            radius: None,
            semi_axes: None,
            k_cap: default_k_cap(),
            dt_min: default_dt_min(),
            dt_max: default_dt_max(),
            snapshot_stride: default_snapshot_stride(),
            max_steps: default_max_steps(),
            lambda_interval: None,
            bisect_tol: default_bisect_tol(),
            expected_n: None,
            shrink_eps: None,
            output_dir: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn family_spec(&self, lambda_override: Option<f64>) -> Result<FamilySpec<f64>, HarnessError> {
        let family = match self.family.as_str() {
            "circle" => Family::Circle {
                r: self.radius.unwrap_or(1.0),
            },
            "ellipse" => {
                let [a, b] = self.semi_axes.unwrap_or([2.0, 1.0]);
                Family::Ellipse { a, b }
            }
            "figure_eight" => Family::FigureEight,
            "l_lambda" => Family::LLambda,
            "m_lambda" => Family::MLambda,
            "trig_three_loop" => Family::TrigThreeLoop,
            other => {
                return Err(HarnessError::Config(format!("unknown family `{other}`")));
            }
        };
        Ok(FamilySpec {
            family,
            lambda: lambda_override.or(self.lambda),
            n_points: self.n_points,
        })
    }

    pub fn solver_config(&self) -> SolverConfig<f64> {
        SolverConfig {
            k_cap: self.k_cap,
            dt_min: self.dt_min,
            dt_max: self.dt_max,
            snapshot_stride: self.snapshot_stride,
            max_steps: self.max_steps,
        }
    }

    /// Loop count implied by the family, unless pinned explicitly.
    pub fn expected_loop_count(&self) -> usize {
        if let Some(n) = self.expected_n {
            return n;
        }
        match self.family.as_str() {
            "figure_eight" => 2,
            "l_lambda" | "trig_three_loop" => 3,
            "m_lambda" => 4,
            _ => 1,
        }
    }
}
