//! Late-time analysis pipeline shared by `analyze`, `bisect` reports and
//! the acceptance suite.

use csf_core::asymptotics::{
    check_eq7, estimate_extinction_time, fit_profile, resolved_part, rightmost_loop_area,
    FitWindow, ProfileFit, TimeEstimate,
};
use csf_core::Trajectory64;

use crate::HarnessError;

/// How far above the final (underflow) step a snapshot's step must stay
/// to count as time-resolved.
pub const RESOLVED_FLOOR_FACTOR: f64 = 10.0;

/// Cap on the number of snapshots whose topology the area series computes.
pub const MAX_AREA_SAMPLES: usize = 60;

/// Everything the analysis extracts from one trajectory.
#[derive(Clone, Debug)]
pub struct Analysis {
    /// Extinction-time estimate from the outer-loop area law.
    pub time_estimate: TimeEstimate<f64>,
    /// Caloric-profile fit at the estimated extinction time.
    pub profile: ProfileFit<f64>,
    /// `(t, ratio)` series for the largest-zero relation.
    pub eq7_ratios: Vec<(f64, f64)>,
    /// `(t, area)` series the extinction fit used.
    pub area_series: Vec<(f64, f64)>,
    /// Final snapshot time of the resolved part.
    pub resolved_end: f64,
}

/// Outer-loop areas over the last decade of the resolved trajectory.
///
/// A first extinction guess comes from the area law applied to the last
/// resolved snapshot; the sampling window is the decade of remaining time
/// before it.
pub fn outer_loop_area_series(traj: &Trajectory64) -> Result<Vec<(f64, f64)>, HarnessError> {
    let last = traj.last();
    let xs = last.curve.self_intersections(-1.0);
    let topo = last.curve.decompose_regions(&xs, -1.0)?;
    let a_last = rightmost_loop_area(&topo).ok_or_else(|| {
        HarnessError::Analysis("final snapshot has no loop region to track".into())
    })?;
    let t_last = last.time;
    let rough_t = t_last + a_last / std::f64::consts::PI;
    let window_lo = rough_t - 10.0 * (rough_t - t_last);

    let mut in_window: Vec<usize> = traj
        .snapshots
        .iter()
        .enumerate()
        .filter(|(_, s)| s.time >= window_lo)
        .map(|(i, _)| i)
        .collect();
    if in_window.len() < 8 {
        // sparse data: widen beyond the decade so the fit has support
        let total = traj.snapshots.len();
        in_window = (total.saturating_sub(12)..total).collect();
    }
    let stride = (in_window.len() / MAX_AREA_SAMPLES).max(1);
    let mut series = Vec::new();
    for (k, &i) in in_window.iter().enumerate() {
        if k % stride != 0 && i != *in_window.last().unwrap() {
            continue;
        }
        let snap = &traj.snapshots[i];
        let xs = snap.curve.self_intersections(-1.0);
        let topo = snap.curve.decompose_regions(&xs, -1.0)?;
        if let Some(a) = rightmost_loop_area(&topo) {
            series.push((snap.time, a));
        }
    }
    Ok(series)
}

/// Runs the full analysis on a trajectory classified as a shrinking
/// `n`-loop: truncate to the resolved regime, fit the extinction time from
/// the outer-loop area law, then fit the caloric profile and the
/// largest-zero ratios.
///
/// When the remaining creep still drags the extinction estimate below the
/// end of the data, the tail past the estimate is discarded and the fit
/// repeated; areas extrapolating to zero inside the data are a sign the
/// flow had already frozen there.
pub fn analyze_trajectory(traj: &Trajectory64, n: usize) -> Result<Analysis, HarnessError> {
    let mut resolved = resolved_part(traj, RESOLVED_FLOOR_FACTOR);
    let mut area_series = outer_loop_area_series(&resolved)?;
    let mut time_estimate = estimate_extinction_time(&area_series)?;
    for _ in 0..12 {
        if time_estimate.t_est > resolved.final_time() {
            break;
        }
        let keep = resolved
            .snapshots
            .iter()
            .take_while(|s| s.time < time_estimate.t_est)
            .count();
        if keep < 3 || keep == resolved.snapshots.len() {
            break;
        }
        resolved.snapshots.truncate(keep);
        area_series = outer_loop_area_series(&resolved)?;
        time_estimate = estimate_extinction_time(&area_series)?;
    }
    if time_estimate.t_est <= resolved.final_time() {
        return Err(HarnessError::Analysis(format!(
            "extinction estimate {} does not clear the last usable snapshot {}",
            time_estimate.t_est,
            resolved.final_time()
        )));
    }
    let profile = fit_profile(
        &resolved,
        n,
        time_estimate.t_est,
        FitWindow::HalfOuterExtremum,
    )?;
    let eq7_ratios = if n >= 3 {
        check_eq7(&resolved, n, time_estimate.t_est)?
    } else {
        Vec::new()
    };
    Ok(Analysis {
        time_estimate,
        profile,
        eq7_ratios,
        area_series,
        resolved_end: resolved.final_time(),
    })
}
