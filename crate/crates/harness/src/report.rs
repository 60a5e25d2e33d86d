//! The JSON experiment report.

use serde::{Deserialize, Serialize};

use crate::analyze::Analysis;
use crate::bisect::ProbeResult;
use crate::config::ExperimentConfig;

/// Summary of the profile fit, serialized into the report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProfileFitReport {
    pub n: usize,
    pub t_est: f64,
    pub k_est: f64,
    /// Slope of `ln a(t)` against `ln(T_est - t)` over the last decade.
    pub slope_loglog: f64,
    pub co4_deviation: f64,
    /// Free-slope fit of the outer-loop area series (the law predicts
    /// `-pi`).
    pub area_slope_free: f64,
    pub width_prefactor_ratio: f64,
    pub b_over_a_final: Option<f64>,
    pub eq7_ratio_final: Option<f64>,
}

impl ProfileFitReport {
    pub fn from_analysis(a: &Analysis) -> Self {
        ProfileFitReport {
            n: a.profile.n,
            t_est: a.time_estimate.t_est,
            k_est: a.profile.k_est,
            slope_loglog: a.profile.width_exponent,
            co4_deviation: a.profile.co4_deviation,
            area_slope_free: a.time_estimate.free.slope,
            width_prefactor_ratio: a.profile.width_prefactor_ratio,
            b_over_a_final: a.profile.b_over_a.last().map(|&(_, r)| r),
            eq7_ratio_final: a.eq7_ratios.last().map(|&(_, r)| r),
        }
    }
}

/// Discretization and code-version provenance attached to every report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Provenance {
    pub family: String,
    pub n_points: usize,
    pub k_cap: f64,
    pub dt_min: f64,
    pub dt_max: f64,
    pub snapshot_stride: usize,
    pub bisect_tol: Option<f64>,
    pub shrink_eps: Option<f64>,
    pub code_version: String,
}

impl Provenance {
    pub fn from_config(cfg: &ExperimentConfig, bisected: bool) -> Self {
        Provenance {
            family: cfg.family.clone(),
            n_points: cfg.n_points,
            k_cap: cfg.k_cap,
            dt_min: cfg.dt_min,
            dt_max: cfg.dt_max,
            snapshot_stride: cfg.snapshot_stride,
            bisect_tol: bisected.then_some(cfg.bisect_tol),
            shrink_eps: cfg.shrink_eps,
            code_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

/// Top-level report: per-parameter outcomes, the critical parameter when
/// bisected, the profile fit of the best run, and provenance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub outcomes: Vec<ProbeResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_star: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bracket: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile_fit: Option<ProfileFitReport>,
    pub provenance: Provenance,
}

impl ExperimentReport {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }
}
