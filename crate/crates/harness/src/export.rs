//! Trajectory persistence: one JSON metadata file plus one CSV of
//! vertices per snapshot, byte-deterministic for a fixed input.

use std::fs;
use std::path::Path;

use csf_core::geometry::{DiscreteCurve, Point};
use csf_core::solver::{FlowSnapshot, StopReason, Trajectory};
use csf_core::Trajectory64;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::HarnessError;

/// Per-snapshot entry of the metadata file.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SnapshotMeta {
    pub file: String,
    pub step: usize,
    pub time: f64,
    pub dt_used: f64,
    pub max_k: f64,
}

/// The metadata file written next to the snapshot CSVs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrajectoryMeta {
    pub stop_reason: String,
    pub total_steps: usize,
    pub n_points: usize,
    /// Echo of the experiment configuration that produced the run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<ExperimentConfig>,
    pub snapshots: Vec<SnapshotMeta>,
    pub code_version: String,
}

fn stop_reason_str(r: StopReason) -> &'static str {
    match r {
        StopReason::DtUnderflow => "dt_underflow",
        StopReason::MaxSteps => "max_steps",
        StopReason::NumericalFailure => "numerical_failure",
    }
}

fn stop_reason_parse(s: &str) -> Result<StopReason, HarnessError> {
    Ok(match s {
        "dt_underflow" => StopReason::DtUnderflow,
        "max_steps" => StopReason::MaxSteps,
        "numerical_failure" => StopReason::NumericalFailure,
        other => {
            return Err(HarnessError::Io(format!("unknown stop reason `{other}`")));
        }
    })
}

/// Writes `metadata.json` plus `snapshot_NNNNNN.csv` files into `dir`.
///
/// Vertex coordinates are written with 17 significant digits, which
/// round-trips `f64` exactly; lines end with `\n`.
pub fn export_trajectory(
    traj: &Trajectory64,
    dir: &Path,
    config: Option<&ExperimentConfig>,
) -> Result<(), HarnessError> {
    fs::create_dir_all(dir).map_err(|e| HarnessError::Io(format!("{}: {e}", dir.display())))?;
    let mut metas = Vec::with_capacity(traj.snapshots.len());
    for (i, snap) in traj.snapshots.iter().enumerate() {
        let file = format!("snapshot_{i:06}.csv");
        let mut body = String::with_capacity(snap.curve.len() * 48 + 16);
        body.push_str("index,x,y\n");
        for (j, v) in snap.curve.vertices().iter().enumerate() {
            body.push_str(&format!("{j},{:.16e},{:.16e}\n", v.x, v.y));
        }
        let path = dir.join(&file);
        fs::write(&path, body).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
        metas.push(SnapshotMeta {
            file,
            step: snap.step,
            time: snap.time,
            dt_used: snap.dt_used,
            max_k: snap.max_k,
        });
    }
    let meta = TrajectoryMeta {
        stop_reason: stop_reason_str(traj.stop_reason).to_string(),
        total_steps: traj.total_steps,
        n_points: traj.snapshots.first().map(|s| s.curve.len()).unwrap_or(0),
        config: config.cloned(),
        snapshots: metas,
        code_version: env!("CARGO_PKG_VERSION").to_string(),
    };
    let mut text = serde_json::to_string_pretty(&meta)?;
    text.push('\n');
    let path = dir.join("metadata.json");
    fs::write(&path, text).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
    Ok(())
}

/// Reads the metadata file of a stored trajectory.
pub fn import_metadata(dir: &Path) -> Result<TrajectoryMeta, HarnessError> {
    let meta_path = dir.join("metadata.json");
    let text = fs::read_to_string(&meta_path)
        .map_err(|e| HarnessError::Io(format!("{}: {e}", meta_path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

/// Reads a trajectory back from a directory written by
/// [`export_trajectory`]; vertices reproduce bit-exactly.
pub fn import_trajectory(dir: &Path) -> Result<Trajectory64, HarnessError> {
    let meta = import_metadata(dir)?;
    let mut snapshots = Vec::with_capacity(meta.snapshots.len());
    for entry in &meta.snapshots {
        let path = dir.join(&entry.file);
        let body = fs::read_to_string(&path)
            .map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
        let mut vertices = Vec::new();
        for (ln, line) in body.lines().enumerate() {
            if ln == 0 {
                continue; // header
            }
            let mut parts = line.split(',');
            let _idx = parts.next();
            let x: f64 = parts
                .next()
                .ok_or_else(|| HarnessError::Io(format!("{}: short row {ln}", path.display())))?
                .parse()
                .map_err(|e| HarnessError::Io(format!("{}: row {ln}: {e}", path.display())))?;
            let y: f64 = parts
                .next()
                .ok_or_else(|| HarnessError::Io(format!("{}: short row {ln}", path.display())))?
                .parse()
                .map_err(|e| HarnessError::Io(format!("{}: row {ln}: {e}", path.display())))?;
            vertices.push(Point::new(x, y));
        }
        let curve = DiscreteCurve::new(vertices)?;
        let bbox = curve.bounding_box();
        snapshots.push(FlowSnapshot {
            step: entry.step,
            time: entry.time,
            curve,
            dt_used: entry.dt_used,
            max_k: entry.max_k,
            bbox,
        });
    }
    Ok(Trajectory {
        snapshots,
        stop_reason: stop_reason_parse(&meta.stop_reason)?,
        total_steps: meta.total_steps,
    })
}
