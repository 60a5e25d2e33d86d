//! The profile-fit machinery checked against data manufactured from the
//! caloric-polynomial model itself.

use csf_core::asymptotics::{
    best_profile_degree, check_eq7, fit_profile, largest_hermite_zero, FitWindow, HeatPolynomial,
};
use csf_core::geometry::{DiscreteCurve, Point};
use csf_core::solver::{FlowSnapshot, StopReason, Trajectory};

/// Builds a closed curve from exact graphs `y = +-u(x)` over `|x| <= a`.
fn curve_from_model(u: impl Fn(f64) -> f64, a: f64, n_half: usize) -> DiscreteCurve<f64> {
    let mut verts = Vec::with_capacity(2 * n_half + 2);
    // upper branch, right to left, then lower branch, left to right;
    // the joins at +-a are vertical closing segments
    for i in 0..=n_half {
        let x = a - 2.0 * a * i as f64 / n_half as f64;
        verts.push(Point::new(x, u(x)));
    }
    for i in 0..=n_half {
        let x = -a + 2.0 * a * i as f64 / n_half as f64;
        verts.push(Point::new(x, -u(x)));
    }
    // drop duplicate turning points if u(+-a) == 0
    verts.dedup_by(|p, q| p.x == q.x && p.y == q.y);
    DiscreteCurve::new(verts).unwrap()
}

/// A synthetic trajectory sampled exactly from `u = K U_(n-1)(t - T, x)`.
fn model_trajectory(n: usize, k: f64, t_singular: f64, a: f64) -> Trajectory<f64> {
    let poly = HeatPolynomial::new(n - 1);
    let mut snapshots = Vec::new();
    let times: Vec<f64> = (0..10).map(|j| 0.8 * t_singular + 0.02 * t_singular * j as f64).collect();
    for (step, &t) in times.iter().enumerate() {
        let u = |x: f64| k * poly.eval(t - t_singular, x);
        let curve = curve_from_model(u, a, 400);
        let bbox = curve.bounding_box();
        snapshots.push(FlowSnapshot {
            step,
            time: t,
            curve,
            dt_used: 0.02 * t_singular,
            max_k: 1.0,
            bbox,
        });
    }
    Trajectory {
        snapshots,
        stop_reason: StopReason::MaxSteps,
        total_steps: times.len(),
    }
}

#[test]
fn amplitude_fit_recovers_model_constant() {
    // u = 2 U_2(t - 0.5, x) on |x| <= 0.1 over t in [0.4, 0.49]
    let traj = model_trajectory(3, 2.0, 0.5, 0.1);
    let fit = fit_profile(&traj, 3, 0.5, FitWindow::WidthFraction(1.0)).unwrap();
    assert!(
        (fit.k_est - 2.0).abs() < 1e-6,
        "K_est = {} should be 2",
        fit.k_est
    );
    assert!(fit.relative_residual < 1e-6);
}

#[test]
fn degree_detection_recovers_n() {
    for n in 2..=5usize {
        let traj = model_trajectory(n, 1.5, 0.5, 0.1);
        let best = best_profile_degree(&traj, 0.5, FitWindow::WidthFraction(1.0), 2..=6).unwrap();
        assert_eq!(best, n, "model degree {n} misdetected as {best}");
        let fit = fit_profile(&traj, n, 0.5, FitWindow::WidthFraction(1.0)).unwrap();
        assert!((fit.k_est - 1.5).abs() < 1e-6, "n={n}: K_est={}", fit.k_est);
    }
}

#[test]
fn eq7_ratio_is_one_on_model_data() {
    // with u exactly K U_(n-1)(t - T, x), the rightmost zero sits at
    // 2 sqrt(T - t) z_(n-1) by construction
    for n in [3usize, 4] {
        let t_singular: f64 = 0.5;
        let a = 3.0 * (t_singular).sqrt(); // keep all zeros inside the domain
        let traj = model_trajectory(n, 1.0, t_singular, a);
        let ratios = check_eq7(&traj, n, t_singular).unwrap();
        assert!(!ratios.is_empty());
        for &(t, r) in &ratios {
            assert!(
                (r - 1.0).abs() < 1e-3,
                "n={n}, t={t}: eq7 ratio {r} should be 1"
            );
        }
    }
}

#[test]
fn largest_zero_matches_model_zero_extraction() {
    // direct cross-check of the scaled largest zero against an
    // independently evaluated polynomial root
    for m in 2..=6usize {
        let z = largest_hermite_zero::<f64>(m).unwrap();
        let poly = HeatPolynomial::new(m);
        // H_m(z) = U_m(-1, 2z) must vanish
        let v = poly.eval(-1.0, 2.0 * z);
        assert!(v.abs() < 1e-9, "m={m}: U_m(-1, 2 z_m) = {v}");
        // and be the largest: no sign change beyond it
        let beyond = poly.eval(-1.0, 2.0 * z + 0.1);
        let at = poly.eval(-1.0, 2.0 * z + 1e-6);
        assert!(beyond > 0.0 && at > 0.0);
    }
}
