//! Intermediate-value search for the critical family parameter.
//!
//! The two bracket classes are "intersections lost" and "intersections
//! persist"; they are disjoint by construction. Bisection narrows the
//! boundary, and the reported critical parameter is the probe that came
//! closest to shrinking to a point while keeping its self-intersections.

use csf_core::asymptotics::rightmost_loop_area;
use csf_core::solver::evolve;
use csf_core::Trajectory64;
use serde::{Deserialize, Serialize};

use crate::classify::{classify, OutcomeClass};
use crate::config::ExperimentConfig;
use crate::HarnessError;

/// Result of one probe run at a fixed parameter value.
///
/// The initial eye and ear areas are recorded so the eye-to-ear balance
/// can be read off directly instead of baking one inequality into the
/// classifier.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProbeResult {
    pub lambda: f64,
    pub outcome: OutcomeClass,
    pub final_box: [f64; 2],
    pub final_diameter: f64,
    pub stop_time: f64,
    pub total_steps: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_eye_area: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_ear_area: Option<f64>,
}

/// Largest eye and rightmost-loop areas of a curve, when decomposable.
fn region_areas(curve: &csf_core::Curve64) -> (Option<f64>, Option<f64>) {
    let xs = curve.self_intersections(-1.0);
    match curve.decompose_regions(&xs, -1.0) {
        Ok(topo) => {
            let eye = topo.eyes().map(|r| r.area).fold(None, |acc: Option<f64>, a| {
                Some(acc.map(|b| b.max(a)).unwrap_or(a))
            });
            (eye, rightmost_loop_area(&topo))
        }
        Err(_) => (None, None),
    }
}

/// The full bisection record.
#[derive(Clone, Debug)]
pub struct BisectionOutcome {
    /// Parameter of the best persisting probe.
    pub lambda_star: f64,
    /// Final bracket `[lo, hi]` around the class boundary.
    pub bracket: [f64; 2],
    /// Every probe, in execution order.
    pub probes: Vec<ProbeResult>,
    /// Trajectory of the best persisting probe.
    pub best_trajectory: Trajectory64,
}

fn run_probe(
    cfg: &ExperimentConfig,
    lambda: f64,
    shrink_eps_abs: Option<f64>,
    expected_n: usize,
) -> Result<(ProbeResult, Trajectory64), HarnessError> {
    let curve = cfg.family_spec(Some(lambda))?.build()?;
    let eps = shrink_eps_abs.unwrap_or(0.05 * curve.bounding_box().diameter());
    let (initial_eye_area, initial_ear_area) = region_areas(&curve);
    let traj = evolve(curve, &cfg.solver_config())?;
    let outcome = classify(&traj, expected_n, eps);
    let last = traj.last();
    let probe = ProbeResult {
        lambda,
        outcome,
        final_box: [last.bbox.width(), last.bbox.height()],
        final_diameter: last.bbox.diameter(),
        stop_time: traj.final_time(),
        total_steps: traj.total_steps,
        initial_eye_area,
        initial_ear_area,
    };
    Ok((probe, traj))
}

/// Bisects `cfg.lambda_interval` on the lost/persist boundary down to
/// `cfg.bisect_tol`, returning the probe record and the best persisting
/// trajectory.
pub fn bisect_lambda(
    cfg: &ExperimentConfig,
    expected_n: usize,
) -> Result<BisectionOutcome, HarnessError> {
    let [mut lo, mut hi] = cfg.lambda_interval.ok_or_else(|| {
        HarnessError::Config("bisection needs a lambda_interval".into())
    })?;
    if !(lo < hi) || !(cfg.bisect_tol > 0.0) {
        return Err(HarnessError::Config(
            "need lambda_lo < lambda_hi and bisect_tol > 0".into(),
        ));
    }
    // pin the shrink threshold to the initial curve at the bracket center
    // so every probe is judged against the same scale
    let mid_curve = cfg.family_spec(Some(0.5 * (lo + hi)))?.build()?;
    let eps = cfg
        .shrink_eps
        .unwrap_or(0.05 * mid_curve.bounding_box().diameter());

    let mut probes = Vec::new();
    let mut best: Option<(f64, Trajectory64, f64)> = None;

    let observe =
        |probe: &ProbeResult, traj: Trajectory64, best: &mut Option<(f64, Trajectory64, f64)>| {
            if probe.outcome.intersections_persisted()
                && best
                    .as_ref()
                    .map(|(d, _, _)| probe.final_diameter < *d)
                    .unwrap_or(true)
            {
                *best = Some((probe.final_diameter, traj, probe.lambda));
            }
        };

    let (p_lo, t_lo) = run_probe(cfg, lo, Some(eps), expected_n)?;
    let (p_hi, t_hi) = run_probe(cfg, hi, Some(eps), expected_n)?;
    let lo_persists = match side(&p_lo.outcome) {
        Some(s) => s,
        None => return Err(bracket_error(&p_lo)),
    };
    let hi_persists = match side(&p_hi.outcome) {
        Some(s) => s,
        None => return Err(bracket_error(&p_hi)),
    };
    if lo_persists == hi_persists {
        return Err(HarnessError::BracketInvalid(format!(
            "both endpoints fall on the same side: {:?} / {:?}",
            p_lo.outcome, p_hi.outcome
        )));
    }
    observe(&p_lo, t_lo, &mut best);
    observe(&p_hi, t_hi, &mut best);
    probes.push(p_lo);
    probes.push(p_hi);

    while hi - lo > cfg.bisect_tol {
        let mid = 0.5 * (lo + hi);
        let (probe, traj) = run_probe(cfg, mid, Some(eps), expected_n)?;
        let mid_persists = match side(&probe.outcome) {
            Some(s) => s,
            None => return Err(bracket_error(&probe)),
        };
        observe(&probe, traj, &mut best);
        probes.push(probe);
        if mid_persists == lo_persists {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let (_, best_trajectory, lambda_star) = best.ok_or_else(|| {
        HarnessError::BracketInvalid("no probe kept its self-intersections".into())
    })?;
    Ok(BisectionOutcome {
        lambda_star,
        bracket: [lo, hi],
        probes,
        best_trajectory,
    })
}

fn side(outcome: &OutcomeClass) -> Option<bool> {
    match outcome {
        OutcomeClass::LostIntersections { .. } => Some(false),
        o if o.intersections_persisted() => Some(true),
        _ => None,
    }
}

fn bracket_error(probe: &ProbeResult) -> HarnessError {
    HarnessError::BracketInvalid(format!(
        "probe at lambda = {} is neither lost nor persisting: {:?}",
        probe.lambda, probe.outcome
    ))
}
