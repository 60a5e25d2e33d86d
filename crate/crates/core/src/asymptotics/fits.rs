//! Late-time diagnostics of a computed trajectory: extinction-time
//! estimate from the loop-area law, amplitude fit of the caloric-polynomial
//! profile, the rescaled-profile deviation, the width-law exponent and the
//! largest-zero ratio.

use crate::asymptotics::branches::{extract_branches, TwoGraphs};
use crate::asymptotics::heat_poly::{largest_hermite_zero, HeatPolynomial};
use crate::error::{Error, Result};
use crate::geometry::{CurveTopology, RegionKind};
use crate::scalar::Real;
use crate::solver::{FlowSnapshot, StopReason, Trajectory};

/// Number of late snapshots used by the amplitude fit.
pub const FIT_SNAPSHOTS: usize = 10;

/// Fraction of the branch span trimmed off each end before looking for
/// interior zeros and extrema.
pub const FEATURE_MARGIN: f64 = 0.01;

/// Cuts off the creeping tail of a trajectory that stopped by step-size
/// underflow: once the adaptive step has collapsed to within
/// `floor_factor` of its final value, the flow is no longer resolved in
/// time (the geometry freezes while `t` inches forward) and the continuum
/// laws stop applying. Returns a trajectory ending at the last snapshot
/// whose step was at least `floor_factor` times the final step.
pub fn resolved_part<T: Real>(traj: &Trajectory<T>, floor_factor: T) -> Trajectory<T> {
    if traj.stop_reason != StopReason::DtUnderflow || traj.snapshots.len() < 3 {
        return traj.clone();
    }
    let dt_final = traj.last().dt_used;
    let threshold = dt_final * floor_factor;
    let mut cut = traj.snapshots.len();
    for (i, s) in traj.snapshots.iter().enumerate().rev() {
        if s.dt_used >= threshold || i == 0 {
            cut = i + 1;
            break;
        }
    }
    Trajectory {
        snapshots: traj.snapshots[..cut].to_vec(),
        stop_reason: traj.stop_reason,
        total_steps: traj.total_steps,
    }
}

/// Ordinary least-squares line `y = slope x + intercept`.
#[derive(Clone, Copy, Debug)]
pub struct LineFit<T> {
    pub slope: T,
    pub intercept: T,
}

/// Fits `y = slope x + intercept` to the samples.
pub fn least_squares_line<T: Real>(samples: &[(T, T)]) -> Result<LineFit<T>> {
    let n = T::from_usize(samples.len()).unwrap();
    if samples.len() < 2 {
        return Err(Error::FitUnreliable("need at least two samples".into()));
    }
    let mut sx = T::zero();
    let mut sy = T::zero();
    for &(x, y) in samples {
        sx = sx + x;
        sy = sy + y;
    }
    let mx = sx / n;
    let my = sy / n;
    let mut sxx = T::zero();
    let mut sxy = T::zero();
    for &(x, y) in samples {
        sxx = sxx + (x - mx) * (x - mx);
        sxy = sxy + (x - mx) * (y - my);
    }
    if sxx == T::zero() {
        return Err(Error::FitUnreliable("degenerate abscissa".into()));
    }
    let slope = sxy / sxx;
    Ok(LineFit {
        slope,
        intercept: my - slope * mx,
    })
}

/// Extinction-time estimate from a decreasing loop-area series.
#[derive(Clone, Copy, Debug)]
pub struct TimeEstimate<T> {
    /// From the fixed-slope fit `A = c - pi t`: `t_est = c / pi`.
    pub t_est: T,
    /// Free-slope fit of the same data, reported as a diagnostic.
    pub free: LineFit<T>,
}

/// Fits the loop-area law `A(t) ~ pi (T - t)` with the slope pinned to
/// `-pi`, extrapolating the area to zero; a free-slope fit is returned
/// alongside. The input is `(t, area)` pairs with strictly decreasing
/// areas.
pub fn estimate_extinction_time<T: Real>(samples: &[(T, T)]) -> Result<TimeEstimate<T>> {
    if samples.len() < 5 {
        return Err(Error::FitUnreliable(format!(
            "need at least 5 area samples, got {}",
            samples.len()
        )));
    }
    for w in samples.windows(2) {
        if !(w[1].1 < w[0].1) {
            return Err(Error::FitUnreliable(format!(
                "areas not strictly decreasing near t = {}",
                w[1].0
            )));
        }
    }
    let pi = T::PI();
    let n = T::from_usize(samples.len()).unwrap();
    let mut c = T::zero();
    for &(t, a) in samples {
        c = c + a + pi * t;
    }
    let c = c / n;
    let free = least_squares_line(samples)?;
    Ok(TimeEstimate { t_est: c / pi, free })
}

/// Area of the loop whose boundary reaches farthest to the right.
pub fn rightmost_loop_area<T: Real>(topo: &CurveTopology<T>) -> Option<T> {
    topo.regions
        .iter()
        .filter(|r| matches!(r.kind, RegionKind::Loop(_)))
        .max_by(|a, b| {
            let ax = a.boundary.iter().map(|p| p.x).fold(T::neg_infinity(), T::max);
            let bx = b.boundary.iter().map(|p| p.x).fold(T::neg_infinity(), T::max);
            ax.partial_cmp(&bx).unwrap_or(std::cmp::Ordering::Equal)
        })
        .map(|r| r.area)
}

/// How the amplitude fit selects its x-window on each snapshot.
#[derive(Clone, Copy, Debug)]
pub enum FitWindow<T> {
    /// `|x - center| <= b(t) / 2`, half the outer-extremum offset; this
    /// stays clear of the steep caps where the profile model breaks down.
    HalfOuterExtremum,
    /// `|x - center| <= fraction x half-width`; for model data without
    /// interior extrema.
    WidthFraction(T),
}

/// Result of fitting the late-time profile `u ~ K U_{n-1}(t - T, x)`.
#[derive(Clone, Debug)]
pub struct ProfileFit<T> {
    /// Loop count of the fitted model (profile degree is `n - 1`).
    pub n: usize,
    /// Extinction-time estimate used by the fit.
    pub t_est: T,
    /// Fitted amplitude, canonicalized positive.
    pub k_est: T,
    /// `(t, b/a)` over the fit snapshots.
    pub b_over_a: Vec<(T, T)>,
    /// Sup-norm distance of the rescaled final-snapshot branch from
    /// `xi^(n-1)` over `|xi| <= b/a`.
    pub co4_deviation: T,
    /// Least-squares slope of `ln a(t)` against `ln(t_est - t)` over the
    /// last decade; the width law predicts `1/n`.
    pub width_exponent: T,
    /// Mean of `a(t) / ((n pi / 2K)(t_est - t))^(1/n)` over the last
    /// decade; the width law predicts 1.
    pub width_prefactor_ratio: T,
    /// Root-mean-square residual of the amplitude fit, per unit model
    /// norm; used to compare candidate degrees.
    pub relative_residual: T,
}

struct SnapshotGeometry<T> {
    time: T,
    graphs: TwoGraphs<T>,
    /// Offset of the outermost interior extremum from the center, zero
    /// when the branch has no interior extrema.
    b: T,
}

fn snapshot_geometry<T: Real>(snap: &FlowSnapshot<T>) -> Result<SnapshotGeometry<T>> {
    let graphs = extract_branches(&snap.curve)?;
    let center = graphs.center();
    let prominence = graphs.upper.default_prominence();
    let b = graphs
        .upper
        .interior_extrema(prominence)
        .iter()
        .map(|&x| (x - center).abs())
        .fold(T::zero(), T::max);
    Ok(SnapshotGeometry {
        time: snap.time,
        graphs,
        b,
    })
}

/// Snapshots of the last decade of `t_est - t`, oldest first.
fn last_decade<T: Real>(traj: &Trajectory<T>, t_est: T) -> Result<Vec<&FlowSnapshot<T>>> {
    let t_last = traj.final_time();
    let gap = t_est - t_last;
    if !(gap > T::zero()) {
        return Err(Error::FitUnreliable(
            "extinction estimate does not exceed the last snapshot time".into(),
        ));
    }
    let lo = t_est - gap * T::of(10.0);
    let picked: Vec<_> = traj
        .snapshots
        .iter()
        .filter(|s| s.time >= lo && s.time < t_est)
        .collect();
    if picked.len() < 3 {
        return Err(Error::FitUnreliable(
            "fewer than 3 snapshots in the last decade".into(),
        ));
    }
    Ok(picked)
}

/// Fits the caloric-polynomial profile of a shrinking `n`-loop.
///
/// `t_est` comes from [`estimate_extinction_time`] on the outer-loop area
/// series. The amplitude is fitted over the last [`FIT_SNAPSHOTS`]
/// snapshots on the window given by `window`; exponent and prefactor
/// diagnostics use the whole last decade of `t_est - t`.
pub fn fit_profile<T: Real>(
    traj: &Trajectory<T>,
    n: usize,
    t_est: T,
    window: FitWindow<T>,
) -> Result<ProfileFit<T>> {
    if n < 2 {
        return Err(Error::InvalidConfig("profiles need n >= 2".into()));
    }
    let (k_est, relative_residual, b_over_a) = fit_amplitude(traj, n, t_est, window)?;

    // rescaled-profile deviation on the final snapshot
    let last = traj.last();
    let geom = snapshot_geometry(last)?;
    let co4_deviation = rescaled_profile_deviation(&geom, n)?;

    // width law over the last decade
    let decade = last_decade(traj, t_est)?;
    let mut log_samples = Vec::new();
    let mut ratio_sum = T::zero();
    let mut ratio_count = 0usize;
    let nf = T::from_usize(n).unwrap();
    let exponent = T::one() / nf;
    for snap in &decade {
        let g = match extract_branches(&snap.curve) {
            Ok(g) => g,
            Err(_) => continue,
        };
        let a = g.half_width();
        let remaining = t_est - snap.time;
        if a > T::zero() && remaining > T::zero() {
            log_samples.push((remaining.ln(), a.ln()));
            let predicted = (nf * T::PI() / (T::of(2.0) * k_est) * remaining).powf(exponent);
            if predicted > T::zero() {
                ratio_sum = ratio_sum + a / predicted;
                ratio_count += 1;
            }
        }
    }
    let width_fit = least_squares_line(&log_samples)?;
    let width_prefactor_ratio = if ratio_count > 0 {
        ratio_sum / T::from_usize(ratio_count).unwrap()
    } else {
        T::nan()
    };

    Ok(ProfileFit {
        n,
        t_est,
        k_est,
        b_over_a,
        co4_deviation,
        width_exponent: width_fit.slope,
        width_prefactor_ratio,
        relative_residual,
    })
}

type AmplitudeFit<T> = (T, T, Vec<(T, T)>);

fn fit_amplitude<T: Real>(
    traj: &Trajectory<T>,
    n: usize,
    t_est: T,
    window: FitWindow<T>,
) -> Result<AmplitudeFit<T>> {
    let poly = HeatPolynomial::new(n - 1);
    let mut geoms = Vec::new();
    for snap in traj.snapshots.iter().rev() {
        if snap.time >= t_est {
            continue;
        }
        if let Ok(g) = snapshot_geometry(snap) {
            geoms.push(g);
        }
        if geoms.len() == FIT_SNAPSHOTS {
            break;
        }
    }
    if geoms.is_empty() {
        return Err(Error::NotGraphLike(
            "no usable snapshots for the amplitude fit".into(),
        ));
    }
    geoms.reverse();

    let mut uu = T::zero();
    let mut uy = T::zero();
    let mut yy = T::zero();
    let mut samples = 0usize;
    let mut b_over_a = Vec::with_capacity(geoms.len());
    for g in &geoms {
        let center = g.graphs.center();
        let a = g.graphs.half_width();
        let half = match window {
            FitWindow::HalfOuterExtremum => g.b / T::of(2.0),
            FitWindow::WidthFraction(f) => a * f,
        };
        b_over_a.push((g.time, g.b / a));
        if !(half > T::zero()) {
            continue;
        }
        let shifted_t = g.time - t_est;
        for (&x, &y) in g.graphs.upper.xs.iter().zip(&g.graphs.upper.ys) {
            let xc = x - center;
            if xc.abs() > half {
                continue;
            }
            let u = poly.eval(shifted_t, xc);
            uu = uu + u * u;
            uy = uy + u * y;
            yy = yy + y * y;
            samples += 1;
        }
    }
    if samples < 5 || uu == T::zero() {
        return Err(Error::FitUnreliable(format!(
            "amplitude fit has only {samples} samples"
        )));
    }
    let k = uy / uu;
    // rms residual relative to the model norm
    let ss_res = (yy - k * k * uu).max(T::zero());
    let rel = (ss_res / (k * k * uu).max(T::min_positive_value())).sqrt();
    Ok((k.abs(), rel, b_over_a))
}

fn rescaled_profile_deviation<T: Real>(geom: &SnapshotGeometry<T>, n: usize) -> Result<T> {
    let g = &geom.graphs;
    let a = g.half_width();
    let center = g.center();
    // vertical normalization: half-extent of the curve in y
    let mut y_min = T::infinity();
    let mut y_max = T::neg_infinity();
    for &y in g.upper.ys.iter().chain(&g.lower.ys) {
        y_min = y_min.min(y);
        y_max = y_max.max(y);
    }
    let half_h = (y_max - y_min) / T::of(2.0);
    let y_center = (y_max + y_min) / T::of(2.0);
    if !(half_h > T::zero()) || !(a > T::zero()) {
        return Err(Error::DegenerateBox {
            width: (a * T::of(2.0)).to_f64_lossy(),
            height: (half_h * T::of(2.0)).to_f64_lossy(),
        });
    }
    // compare on |xi| <= b/a, the window where the profile model applies
    let xi_max = if geom.b > T::zero() {
        (geom.b / a).min(T::one())
    } else {
        T::of(0.9)
    };
    let m = 201;
    let mut dev_plus = T::zero();
    let mut dev_minus = T::zero();
    for j in 0..m {
        let xi = (T::from_usize(j).unwrap() / T::from_usize(m - 1).unwrap()
            * T::of(2.0)
            - T::one())
            * xi_max;
        let x = center + xi * a;
        if let Some(y) = g.upper.eval(x) {
            let u_cs = (y - y_center) / half_h;
            let reference = pow_signed(xi, n - 1);
            dev_plus = dev_plus.max((u_cs - reference).abs());
            dev_minus = dev_minus.max((u_cs + reference).abs());
        }
    }
    Ok(dev_plus.min(dev_minus))
}

fn pow_signed<T: Real>(x: T, p: usize) -> T {
    let mut acc = T::one();
    for _ in 0..p {
        acc = acc * x;
    }
    acc
}

/// Ratios `x_*(t) / (2 sqrt(t_est - t) z_{n-1})` per last-decade snapshot,
/// where `x_*` is the rightmost interior zero of the upper branch. The
/// largest-zero relation predicts the ratio approaches 1.
pub fn check_eq7<T: Real>(traj: &Trajectory<T>, n: usize, t_est: T) -> Result<Vec<(T, T)>> {
    let z = largest_hermite_zero::<T>(n - 1)?;
    if !(z > T::zero()) {
        return Err(Error::InvalidConfig(
            "largest-zero relation needs n >= 3".into(),
        ));
    }
    let decade = last_decade(traj, t_est)?;
    let mut out = Vec::new();
    for snap in decade {
        let g = match extract_branches(&snap.curve) {
            Ok(g) => g,
            Err(_) => continue,
        };
        let center = g.center();
        let zeros = g.upper.interior_zeros(T::of(FEATURE_MARGIN));
        let Some(&rightmost) = zeros.last() else {
            continue;
        };
        let x_star = rightmost - center;
        let remaining = t_est - snap.time;
        if remaining > T::zero() && x_star > T::zero() {
            let ratio = x_star / (T::of(2.0) * remaining.sqrt() * z);
            out.push((snap.time, ratio));
        }
    }
    if out.is_empty() {
        return Err(Error::NotGraphLike(
            "no snapshot yielded a rightmost interior zero".into(),
        ));
    }
    Ok(out)
}

/// Fits every candidate loop count and returns the one with the smallest
/// relative residual; recovers `n` on model data.
pub fn best_profile_degree<T: Real>(
    traj: &Trajectory<T>,
    t_est: T,
    window: FitWindow<T>,
    candidates: std::ops::RangeInclusive<usize>,
) -> Result<usize> {
    let mut best: Option<(usize, T)> = None;
    for n in candidates {
        if let Ok((_, rel, _)) = fit_amplitude(traj, n, t_est, window) {
            if best.map(|(_, r)| rel < r).unwrap_or(true) {
                best = Some((n, rel));
            }
        }
    }
    best.map(|(n, _)| n)
        .ok_or_else(|| Error::FitUnreliable("no candidate degree fits".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_linear_area_data_recovers_extinction() {
        // A(t) = pi (0.3 - t)
        let samples: Vec<(f64, f64)> = (0..10)
            .map(|i| {
                let t = 0.01 * i as f64;
                (t, std::f64::consts::PI * (0.3 - t))
            })
            .collect();
        let est = estimate_extinction_time(&samples).unwrap();
        assert!((est.t_est - 0.3).abs() < 1e-14);
        assert!((est.free.slope + std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn non_monotone_areas_rejected() {
        let samples = vec![(0.0, 1.0), (0.1, 0.9), (0.2, 0.95), (0.3, 0.8), (0.4, 0.7)];
        assert!(matches!(
            estimate_extinction_time(&samples),
            Err(Error::FitUnreliable(_))
        ));
    }

    #[test]
    fn least_squares_recovers_line() {
        let samples: Vec<(f64, f64)> =
            (0..20).map(|i| (i as f64, 3.0 * i as f64 - 7.0)).collect();
        let fit = least_squares_line(&samples).unwrap();
        assert!((fit.slope - 3.0).abs() < 1e-12);
        assert!((fit.intercept + 7.0).abs() < 1e-12);
    }
}
