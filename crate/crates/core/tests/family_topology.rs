//! Self-intersection counts of the curve families at high resolution,
//! frozen as regression values with the detector as its own oracle.

use csf_core::families;

#[test]
#[cfg_attr(debug_assertions, ignore = "heavy; run under --release")]
fn family_intersection_counts_at_n_10000() {
    let n = 10_000;

    let fig8 = families::figure_eight::<f64>(n).unwrap();
    assert_eq!(fig8.self_intersections(-1.0).len(), 1);

    for &lam in &[0.2, 0.5, 0.8] {
        let l = families::l_lambda::<f64>(lam, n).unwrap();
        assert_eq!(l.self_intersections(-1.0).len(), 2, "l_lambda({lam})");
    }

    for &lam in &[0.3, 0.5, 0.7] {
        let m = families::m_lambda::<f64>(lam, n).unwrap();
        assert_eq!(m.self_intersections(-1.0).len(), 3, "m_lambda({lam})");
    }

    // the trig family is a 3-loop strictly between lambda = 1/3 and 1/2
    for &lam in &[0.36, 0.45, 0.48] {
        let t = families::trig_three_loop::<f64>(lam, n).unwrap();
        assert_eq!(
            t.self_intersections(-1.0).len(),
            2,
            "trig_three_loop({lam})"
        );
    }
    for &lam in &[0.2, 0.32, 0.52, 0.7] {
        let t = families::trig_three_loop::<f64>(lam, n).unwrap();
        assert_eq!(
            t.self_intersections(-1.0).len(),
            0,
            "trig_three_loop({lam}) should be embedded"
        );
    }
}
