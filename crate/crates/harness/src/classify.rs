//! Deterministic classification of a flow trajectory's outcome.

use csf_core::solver::StopReason;
use csf_core::{Error as CoreError, Trajectory64};
use serde::{Deserialize, Serialize};

/// How many snapshots the classifier inspects topology on (evenly spaced,
/// always including the first and last). Events between checked snapshots
/// are bounded by the monotonicity of the intersection count.
pub const MAX_TOPOLOGY_CHECKS: usize = 64;

/// What a trajectory did, as one of the disjoint outcome classes the
/// bisection brackets against.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OutcomeClass {
    /// Kept all `n - 1` self-intersections at every checked snapshot and
    /// collapsed to a box smaller than the shrink threshold.
    ShrankAsNLoop { n: usize },
    /// The intersection count dropped below `n - 1`.
    LostIntersections { at_time: f64 },
    /// Stopped at the singular time with intersections intact but a box
    /// that is not small: the singularity did not absorb the whole curve.
    SingularNotPoint { final_box: [f64; 2] },
    /// Two intersections merged within tolerance: three branches through
    /// one point.
    TriplePointEvent { at_time: f64 },
    /// The run ended without a usable verdict (step budget, numerical
    /// failure, or inconsistent initial topology).
    Inconclusive { reason: String },
}

/// Classifies a trajectory against the expected loop count.
///
/// `shrink_eps` is the absolute bounding-box diameter under which the
/// final state counts as having shrunk to a point.
pub fn classify(traj: &Trajectory64, expected_n: usize, shrink_eps: f64) -> OutcomeClass {
    let expected_crossings = expected_n.saturating_sub(1);
    let m = traj.snapshots.len();
    let stride = (m / MAX_TOPOLOGY_CHECKS).max(1);

    for (i, snap) in traj.snapshots.iter().enumerate() {
        if i % stride != 0 && i != m - 1 {
            continue;
        }
        let xs = snap.curve.self_intersections(-1.0);
        match snap.curve.decompose_regions(&xs, -1.0) {
            Err(CoreError::TriplePoint { .. }) => {
                return OutcomeClass::TriplePointEvent { at_time: snap.time };
            }
            Err(e) => {
                return OutcomeClass::Inconclusive {
                    reason: format!("topology failed at t = {}: {e}", snap.time),
                };
            }
            Ok(_) => {}
        }
        // fewer crossings than an n-loop carries: lost (possibly already
        // at t = 0, e.g. an embedded member of the family); more: the
        // expected count cannot describe this trajectory
        if xs.len() < expected_crossings {
            return OutcomeClass::LostIntersections { at_time: snap.time };
        }
        if xs.len() > expected_crossings {
            return OutcomeClass::Inconclusive {
                reason: format!(
                    "curve has {} self-intersections at t = {}, expected {expected_crossings}",
                    xs.len(),
                    snap.time
                ),
            };
        }
    }

    match traj.stop_reason {
        StopReason::DtUnderflow => {
            let last = traj.last();
            if last.bbox.diameter() < shrink_eps {
                OutcomeClass::ShrankAsNLoop { n: expected_n }
            } else {
                OutcomeClass::SingularNotPoint {
                    final_box: [last.bbox.width(), last.bbox.height()],
                }
            }
        }
        StopReason::MaxSteps => OutcomeClass::Inconclusive {
            reason: "step budget exhausted before the singular time".into(),
        },
        StopReason::NumericalFailure => OutcomeClass::Inconclusive {
            reason: "numerical failure".into(),
        },
    }
}

impl OutcomeClass {
    /// Whether the trajectory kept its self-intersections to the end
    /// (the bracket side opposite to `LostIntersections`).
    pub fn intersections_persisted(&self) -> bool {
        matches!(
            self,
            OutcomeClass::ShrankAsNLoop { .. } | OutcomeClass::SingularNotPoint { .. }
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use csf_core::families;
    use csf_core::solver::{evolve, SolverConfig};

    #[test]
    fn circle_classifies_as_shrinking_one_loop() {
        let curve = families::circle::<f64>(0.3, 128).unwrap();
        let diam0 = curve.bounding_box().diameter();
        let cfg = SolverConfig {
            snapshot_stride: 50,
            ..SolverConfig::default()
        };
        let traj = evolve(curve, &cfg).unwrap();
        let out = classify(&traj, 1, 0.05 * diam0);
        assert_eq!(out, OutcomeClass::ShrankAsNLoop { n: 1 });
    }

    #[test]
    fn l_lambda_near_tangency_loses_intersections() {
        let curve = families::l_lambda::<f64>(0.05, 512).unwrap();
        let diam0 = curve.bounding_box().diameter();
        let cfg = SolverConfig {
            snapshot_stride: 20,
            ..SolverConfig::default()
        };
        let traj = evolve(curve, &cfg).unwrap();
        let out = classify(&traj, 3, 0.05 * diam0);
        assert!(
            matches!(out, OutcomeClass::LostIntersections { .. }),
            "got {out:?}"
        );
    }

    #[test]
    fn l_lambda_large_eye_is_singular_not_point() {
        // near lambda = 1 the ears are tiny and pinch off early while the
        // big eye persists: singular without shrinking to a point
        let curve = families::l_lambda::<f64>(0.95, 1024).unwrap();
        let diam0 = curve.bounding_box().diameter();
        let cfg = SolverConfig {
            k_cap: 1e3,
            snapshot_stride: 50,
            ..SolverConfig::default()
        };
        let traj = evolve(curve, &cfg).unwrap();
        let out = classify(&traj, 3, 0.05 * diam0);
        assert!(
            matches!(out, OutcomeClass::SingularNotPoint { .. }),
            "got {out:?}"
        );
    }

    #[test]
    fn classification_is_deterministic() {
        let curve = families::figure_eight::<f64>(256).unwrap();
        let diam0 = curve.bounding_box().diameter();
        let cfg = SolverConfig {
            snapshot_stride: 40,
            ..SolverConfig::default()
        };
        let traj = evolve(curve, &cfg).unwrap();
        let a = classify(&traj, 2, 0.05 * diam0);
        let b = classify(&traj, 2, 0.05 * diam0);
        assert_eq!(a, b);
    }
}
