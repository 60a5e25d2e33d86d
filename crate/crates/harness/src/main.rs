//! Command line driver.
//!
//! Subcommands:
//!   run      evolve one initial curve, classify it, export the trajectory
//!   bisect   search the critical family parameter over an interval
//!   analyze  fit the late-time asymptotics of a stored trajectory
//!   plot     render stored snapshots as SVG
//!
//! All configuration comes from one JSON file (`--config`), with
//! individual flags overriding single fields.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use csf_harness::analyze::analyze_trajectory;
use csf_harness::bisect::{bisect_lambda, ProbeResult};
use csf_harness::classify::classify;
use csf_harness::config::ExperimentConfig;
use csf_harness::export::{export_trajectory, import_metadata, import_trajectory};
use csf_harness::plot::{render_plot, PlotMode};
use csf_harness::report::{ExperimentReport, ProfileFitReport, Provenance};
use csf_harness::HarnessError;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let Some((command, opts)) = parse_args(&args) else {
        eprintln!("{USAGE}");
        return ExitCode::from(2);
    };
    let result = match command.as_str() {
        "run" => cmd_run(&opts),
        "bisect" => cmd_bisect(&opts),
        "analyze" => cmd_analyze(&opts),
        "plot" => cmd_plot(&opts),
        "help" | "--help" | "-h" => {
            println!("{USAGE}");
            return ExitCode::SUCCESS;
        }
        other => Err(HarnessError::Config(format!("unknown command `{other}`"))),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

const USAGE: &str = "\
usage: csf <command> [--config FILE] [flags]

commands:
  run       evolve one initial curve and classify the outcome
  bisect    bisect lambda over an interval for the critical parameter
  analyze   fit asymptotics on a stored trajectory
  plot      render stored snapshots as an SVG figure

flags (override the config file):
  --config PATH          JSON experiment config
  --family NAME          circle | ellipse | figure_eight | l_lambda |
                         m_lambda | trig_three_loop
  --lambda X             family parameter
  --n-points N           vertices on the initial curve
  --k-cap X              coefficient cap
  --dt-min X             stopping step size
  --dt-max X             step clamp
  --snapshot-stride N    steps between snapshots
  --max-steps N          step budget
  --interval LO,HI       bisection bracket
  --bisect-tol X         bisection width target
  --expected-n N         loop count for the classifier
  --shrink-eps X         absolute shrink threshold
  --out DIR              output directory
  --traj DIR             stored trajectory (analyze, plot)
  --mode MODE            cartesian | cs (plot)
  --snapshots I,J,...    snapshot indices to plot (default: last)
";

type Opts = BTreeMap<String, String>;

fn parse_args(args: &[String]) -> Option<(String, Opts)> {
    let mut it = args.iter();
    let command = it.next()?.clone();
    let mut opts = BTreeMap::new();
    while let Some(arg) = it.next() {
        let Some(key) = arg.strip_prefix("--") else {
            eprintln!("unexpected argument `{arg}`");
            return None;
        };
        if let Some((k, v)) = key.split_once('=') {
            opts.insert(k.to_string(), v.to_string());
        } else {
            let Some(value) = it.next() else {
                eprintln!("flag --{key} needs a value");
                return None;
            };
            opts.insert(key.to_string(), value.clone());
        }
    }
    Some((command, opts))
}

fn parsed<T: std::str::FromStr>(opts: &Opts, key: &str) -> Result<Option<T>, HarnessError>
where
    T::Err: std::fmt::Display,
{
    match opts.get(key) {
        None => Ok(None),
        Some(raw) => raw
            .parse::<T>()
            .map(Some)
            .map_err(|e| HarnessError::Config(format!("--{key} {raw}: {e}"))),
    }
}

fn load_config(opts: &Opts) -> Result<ExperimentConfig, HarnessError> {
    let mut cfg = match opts.get("config") {
        Some(path) => ExperimentConfig::load(Path::new(path))?,
        None => ExperimentConfig::default(),
    };
    if let Some(v) = opts.get("family") {
        cfg.family = v.clone();
    }
    if let Some(v) = parsed(opts, "lambda")? {
        cfg.lambda = Some(v);
    }
    if let Some(v) = parsed(opts, "n-points")? {
        cfg.n_points = v;
    }
    if let Some(v) = parsed(opts, "k-cap")? {
        cfg.k_cap = v;
    }
    if let Some(v) = parsed(opts, "dt-min")? {
        cfg.dt_min = v;
    }
    if let Some(v) = parsed(opts, "dt-max")? {
        cfg.dt_max = v;
    }
    if let Some(v) = parsed(opts, "snapshot-stride")? {
        cfg.snapshot_stride = v;
    }
    if let Some(v) = parsed(opts, "max-steps")? {
        cfg.max_steps = v;
    }
    if let Some(v) = parsed(opts, "bisect-tol")? {
        cfg.bisect_tol = v;
    }
    if let Some(v) = parsed(opts, "expected-n")? {
        cfg.expected_n = Some(v);
    }
    if let Some(v) = parsed(opts, "shrink-eps")? {
        cfg.shrink_eps = Some(v);
    }
    if let Some(v) = opts.get("interval") {
        let (lo, hi) = v
            .split_once(',')
            .ok_or_else(|| HarnessError::Config("--interval needs LO,HI".into()))?;
        let lo: f64 = lo
            .trim()
            .parse()
            .map_err(|e| HarnessError::Config(format!("--interval: {e}")))?;
        let hi: f64 = hi
            .trim()
            .parse()
            .map_err(|e| HarnessError::Config(format!("--interval: {e}")))?;
        cfg.lambda_interval = Some([lo, hi]);
    }
    if let Some(v) = opts.get("out") {
        cfg.output_dir = Some(v.clone());
    }
    Ok(cfg)
}

fn out_dir(cfg: &ExperimentConfig, default: &str) -> PathBuf {
    PathBuf::from(cfg.output_dir.clone().unwrap_or_else(|| default.into()))
}

fn write_report(dir: &Path, report: &ExperimentReport) -> Result<(), HarnessError> {
    std::fs::create_dir_all(dir).map_err(|e| HarnessError::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join("report.json");
    std::fs::write(&path, report.to_json())
        .map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
    println!("report: {}", path.display());
    Ok(())
}

fn cmd_run(opts: &Opts) -> Result<(), HarnessError> {
    let cfg = load_config(opts)?;
    let curve = cfg.family_spec(None)?.build()?;
    let eps = cfg
        .shrink_eps
        .unwrap_or(0.05 * curve.bounding_box().diameter());
    let expected_n = cfg.expected_loop_count();
    let traj = csf_core::solver::evolve(curve, &cfg.solver_config())?;
    let outcome = classify(&traj, expected_n, eps);
    let last = traj.last();
    println!(
        "stop: {:?} after {} steps at t = {:.8}",
        traj.stop_reason, traj.total_steps, last.time
    );
    println!(
        "final box {:.6e} x {:.6e}, outcome: {outcome:?}",
        last.bbox.width(),
        last.bbox.height()
    );

    let first = &traj.snapshots[0];
    let first_xs = first.curve.self_intersections(-1.0);
    let (initial_eye_area, initial_ear_area) = match first.curve.decompose_regions(&first_xs, -1.0)
    {
        Ok(topo) => {
            let eye = topo
                .eyes()
                .map(|r| r.area)
                .fold(None, |acc: Option<f64>, a| {
                    Some(acc.map(|b| b.max(a)).unwrap_or(a))
                });
            (eye, csf_core::asymptotics::rightmost_loop_area(&topo))
        }
        Err(_) => (None, None),
    };
    let probe = ProbeResult {
        lambda: cfg.lambda.unwrap_or(f64::NAN),
        outcome: outcome.clone(),
        final_box: [last.bbox.width(), last.bbox.height()],
        final_diameter: last.bbox.diameter(),
        stop_time: last.time,
        total_steps: traj.total_steps,
        initial_eye_area,
        initial_ear_area,
    };
    let profile_fit = if outcome.intersections_persisted() && expected_n >= 2 {
        analyze_trajectory(&traj, expected_n)
            .ok()
            .map(|a| ProfileFitReport::from_analysis(&a))
    } else {
        None
    };
    let report = ExperimentReport {
        outcomes: vec![probe],
        lambda_star: None,
        bracket: None,
        profile_fit,
        provenance: Provenance::from_config(&cfg, false),
    };
    let dir = out_dir(&cfg, "out/run");
    export_trajectory(&traj, &dir.join("trajectory"), Some(&cfg))?;
    write_report(&dir, &report)
}

fn cmd_bisect(opts: &Opts) -> Result<(), HarnessError> {
    let cfg = load_config(opts)?;
    if cfg.lambda_interval.is_none() {
        return Err(HarnessError::Config(
            "bisect needs --interval LO,HI or lambda_interval in the config".into(),
        ));
    }
    let expected_n = cfg.expected_loop_count();
    let outcome = bisect_lambda(&cfg, expected_n)?;
    println!(
        "lambda* = {:.9} (bracket [{:.9}, {:.9}], {} probes)",
        outcome.lambda_star,
        outcome.bracket[0],
        outcome.bracket[1],
        outcome.probes.len()
    );
    let profile_fit = analyze_trajectory(&outcome.best_trajectory, expected_n)
        .ok()
        .map(|a| ProfileFitReport::from_analysis(&a));
    let report = ExperimentReport {
        outcomes: outcome.probes.clone(),
        lambda_star: Some(outcome.lambda_star),
        bracket: Some(outcome.bracket),
        profile_fit,
        provenance: Provenance::from_config(&cfg, true),
    };
    let dir = out_dir(&cfg, "out/bisect");
    let best_cfg = ExperimentConfig {
        lambda: Some(outcome.lambda_star),
        ..cfg.clone()
    };
    export_trajectory(
        &outcome.best_trajectory,
        &dir.join("best_trajectory"),
        Some(&best_cfg),
    )?;
    write_report(&dir, &report)
}

fn cmd_analyze(opts: &Opts) -> Result<(), HarnessError> {
    let traj_dir = opts
        .get("traj")
        .ok_or_else(|| HarnessError::Config("analyze needs --traj DIR".into()))?;
    let mut cfg = load_config(opts)?;
    if opts.get("config").is_none() {
        // prefer the provenance stored with the trajectory
        if let Some(stored) = import_metadata(Path::new(traj_dir))?.config {
            let overridden = cfg.clone();
            cfg = stored;
            cfg.expected_n = overridden.expected_n.or(cfg.expected_n);
            cfg.output_dir = overridden.output_dir.or(cfg.output_dir);
        }
    }
    let expected_n = cfg.expected_loop_count();
    let traj = import_trajectory(Path::new(traj_dir))?;
    let analysis = analyze_trajectory(&traj, expected_n)?;
    let fit = ProfileFitReport::from_analysis(&analysis);
    println!(
        "T_est = {:.8}  K = {:.5}  width exponent = {:.4}  co4 deviation = {:.4}",
        fit.t_est, fit.k_est, fit.slope_loglog, fit.co4_deviation
    );
    println!(
        "area slope (free) = {:.4}  prefactor ratio = {:.3}  b/a final = {:?}",
        fit.area_slope_free, fit.width_prefactor_ratio, fit.b_over_a_final
    );
    let report = ExperimentReport {
        outcomes: Vec::new(),
        lambda_star: None,
        bracket: None,
        profile_fit: Some(fit),
        provenance: Provenance::from_config(&cfg, false),
    };
    let dir = out_dir(&cfg, "out/analyze");
    write_report(&dir, &report)
}

fn cmd_plot(opts: &Opts) -> Result<(), HarnessError> {
    let traj_dir = opts
        .get("traj")
        .ok_or_else(|| HarnessError::Config("plot needs --traj DIR".into()))?;
    let traj = import_trajectory(Path::new(traj_dir))?;
    let mode = match opts.get("mode").map(String::as_str) {
        None | Some("cartesian") => PlotMode::Cartesian,
        Some("cs") => {
            let cfg = load_config(opts)?;
            PlotMode::CsRescaled {
                n: cfg.expected_loop_count(),
            }
        }
        Some(other) => {
            return Err(HarnessError::Config(format!("unknown plot mode `{other}`")));
        }
    };
    let indices: Vec<usize> = match opts.get("snapshots") {
        Some(raw) => raw
            .split(',')
            .map(|s| {
                s.trim()
                    .parse()
                    .map_err(|e| HarnessError::Config(format!("--snapshots: {e}")))
            })
            .collect::<Result<_, _>>()?,
        None => vec![traj.snapshots.len() - 1],
    };
    let picked: Vec<_> = indices
        .iter()
        .map(|&i| {
            traj.snapshots.get(i).ok_or_else(|| {
                HarnessError::Config(format!(
                    "snapshot {i} out of range (0..{})",
                    traj.snapshots.len()
                ))
            })
        })
        .collect::<Result<_, _>>()?;
    let svg = render_plot(&picked, mode)?;
    let out = opts
        .get("out")
        .cloned()
        .unwrap_or_else(|| "out/plot.svg".into());
    let path = PathBuf::from(out);
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| HarnessError::Io(format!("{}: {e}", parent.display())))?;
        }
    }
    std::fs::write(&path, svg).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
    println!("figure: {}", path.display());
    Ok(())
}
