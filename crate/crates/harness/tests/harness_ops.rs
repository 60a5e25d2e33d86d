//! Harness-level behavior: persistence round trips, determinism,
//! bracket handling and figure rendering.

use std::path::PathBuf;

use csf_core::families;
use csf_core::solver::{evolve, SolverConfig};
use csf_harness::bisect::bisect_lambda;
use csf_harness::classify::{classify, OutcomeClass};
use csf_harness::config::ExperimentConfig;
use csf_harness::export::{export_trajectory, import_trajectory};
use csf_harness::plot::{render_plot, PlotMode};
use csf_harness::report::{ExperimentReport, Provenance};
use csf_harness::HarnessError;

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("csf-test-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

fn short_circle_trajectory() -> csf_core::Trajectory64 {
    let curve = families::circle::<f64>(1.0, 100).unwrap();
    let cfg = SolverConfig {
        max_steps: 120,
        snapshot_stride: 50,
        ..SolverConfig::default()
    };
    evolve(curve, &cfg).unwrap()
}

#[test]
fn export_layout_and_bit_exact_round_trip() {
    let traj = short_circle_trajectory();
    assert_eq!(traj.snapshots.len(), 4); // initial + 2 strided + final
    let dir = temp_dir("roundtrip");
    export_trajectory(&traj, &dir, None).unwrap();

    // one metadata file plus one csv per snapshot, each N + 1 lines
    let mut files: Vec<String> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    files.sort();
    assert_eq!(files.len(), 1 + traj.snapshots.len());
    assert!(files.contains(&"metadata.json".to_string()));
    let csv = std::fs::read_to_string(dir.join("snapshot_000000.csv")).unwrap();
    assert_eq!(csv.lines().count(), 101);
    assert_eq!(csv.lines().next().unwrap(), "index,x,y");
    assert!(!csv.contains('\r'));

    let back = import_trajectory(&dir).unwrap();
    assert_eq!(back.stop_reason, traj.stop_reason);
    assert_eq!(back.total_steps, traj.total_steps);
    assert_eq!(back.snapshots.len(), traj.snapshots.len());
    for (a, b) in traj.snapshots.iter().zip(&back.snapshots) {
        assert_eq!(a.time, b.time);
        assert_eq!(a.step, b.step);
        for (p, q) in a.curve.vertices().iter().zip(b.curve.vertices()) {
            assert_eq!(p.x.to_bits(), q.x.to_bits(), "x not bit-exact");
            assert_eq!(p.y.to_bits(), q.y.to_bits(), "y not bit-exact");
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn export_is_byte_deterministic() {
    let traj = short_circle_trajectory();
    let dir_a = temp_dir("det-a");
    let dir_b = temp_dir("det-b");
    export_trajectory(&traj, &dir_a, None).unwrap();
    export_trajectory(&traj, &dir_b, None).unwrap();
    for name in ["metadata.json", "snapshot_000000.csv", "snapshot_000003.csv"] {
        let a = std::fs::read(dir_a.join(name)).unwrap();
        let b = std::fs::read(dir_b.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between identical exports");
    }
    let _ = std::fs::remove_dir_all(&dir_a);
    let _ = std::fs::remove_dir_all(&dir_b);
}

#[test]
fn report_json_is_deterministic() {
    let cfg = ExperimentConfig::default();
    let report = ExperimentReport {
        outcomes: Vec::new(),
        lambda_star: Some(0.5),
        bracket: Some([0.4, 0.6]),
        profile_fit: None,
        provenance: Provenance::from_config(&cfg, true),
    };
    assert_eq!(report.to_json(), report.to_json());
    // field names fixed by the schema
    let text = report.to_json();
    for key in ["outcomes", "lambda_star", "provenance", "code_version"] {
        assert!(text.contains(key), "missing `{key}` in {text}");
    }
}

#[test]
fn empty_trajectory_exports_metadata_only() {
    // a trajectory always has at least the initial snapshot, so the
    // leanest export is one metadata file plus one csv
    let curve = families::circle::<f64>(1.0, 64).unwrap();
    let cfg = SolverConfig {
        max_steps: 0,
        ..SolverConfig::default()
    };
    let traj = evolve(curve, &cfg).unwrap();
    assert_eq!(traj.snapshots.len(), 1);
    let dir = temp_dir("empty");
    export_trajectory(&traj, &dir, None).unwrap();
    let count = std::fs::read_dir(&dir).unwrap().count();
    assert_eq!(count, 2);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn bisection_brackets_the_class_boundary() {
    // small lambda: the nearly-tangent crossings resolve and the curve
    // embeds (lost side); moderate lambda: the ears pinch with crossings
    // intact (persist side). Bisection must bracket the flip.
    let cfg = ExperimentConfig {
        family: "l_lambda".into(),
        n_points: 600,
        k_cap: 1e3,
        snapshot_stride: 50,
        lambda_interval: Some([0.05, 0.6]),
        bisect_tol: 1e-2,
        ..ExperimentConfig::default()
    };
    let outcome = bisect_lambda(&cfg, 3).unwrap();
    let [lo, hi] = outcome.bracket;
    assert!(hi - lo <= 1e-2 + 1e-12);
    assert!(lo > 0.05 && hi < 0.6);
    assert!(outcome.lambda_star >= lo - 1e-2 && outcome.lambda_star <= hi + 1e-2);
    // probes on both sides were seen
    assert!(outcome
        .probes
        .iter()
        .any(|p| matches!(p.outcome, OutcomeClass::LostIntersections { .. })));
    assert!(outcome.probes.iter().any(|p| p.outcome.intersections_persisted()));
}

#[test]
fn invalid_bracket_is_rejected() {
    // both endpoints lose their crossings immediately: no sign change
    let cfg = ExperimentConfig {
        family: "l_lambda".into(),
        n_points: 400,
        k_cap: 1e4,
        snapshot_stride: 100,
        lambda_interval: Some([0.02, 0.05]),
        bisect_tol: 1e-2,
        ..ExperimentConfig::default()
    };
    match bisect_lambda(&cfg, 3) {
        Err(HarnessError::BracketInvalid(_)) => {}
        other => panic!("expected BracketInvalid, got {other:?}"),
    }
}

#[test]
fn classify_flags_missing_crossings_as_lost_at_time_zero() {
    let traj = short_circle_trajectory();
    // a circle has no crossings: against an expected 3-loop that counts
    // as having lost them from the start
    let out = classify(&traj, 3, 0.1);
    assert!(
        matches!(out, OutcomeClass::LostIntersections { at_time } if at_time == 0.0),
        "got {out:?}"
    );
}

#[test]
fn plot_files_are_valid_svg_documents() {
    let traj = short_circle_trajectory();
    let picked: Vec<_> = traj.snapshots.iter().collect();
    for mode in [PlotMode::Cartesian, PlotMode::CsRescaled { n: 3 }] {
        let svg = render_plot(&picked, mode).unwrap();
        assert!(svg.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\""));
        assert!(svg.trim_end().ends_with("</svg>"));
        let opens = svg.matches("<polyline").count();
        let closes = svg.matches("/>").count();
        assert!(opens >= picked.len());
        assert!(closes >= opens);
    }
}
