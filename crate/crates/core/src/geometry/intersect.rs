//! Self-intersection detection for closed polygonal curves.
//!
//! Exhaustive tests over non-adjacent segment pairs with a bounding-box
//! early reject. O(N^2) is accepted: at the sizes used here the flow
//! solver dominates runtime, and robustness matters more than speed.

use crate::geometry::curve::DiscreteCurve;
use crate::geometry::point::{angle_between, Point};
use crate::scalar::Real;

/// Crossing angle below which an intersection is flagged as a near
/// tangency (radians).
pub const NEAR_TANGENCY_ANGLE: f64 = 1e-6;

/// Default merge tolerance, relative to the curve diameter.
pub const MERGE_TOL_REL: f64 = 1e-9;

/// A transverse self-intersection of the curve.
///
/// The curve passes through `point` twice: once on segment `seg_a` at
/// local parameter `s_a`, once on segment `seg_b` at `s_b`. Near-tangential
/// crossings are still reported, with `near_tangency` set.
#[derive(Clone, Copy, Debug)]
pub struct Intersection<T> {
    pub point: Point<T>,
    pub seg_a: usize,
    pub s_a: T,
    pub seg_b: usize,
    pub s_b: T,
    /// Crossing angle between the two branches, in `(0, pi)`.
    pub crossing_angle: T,
    pub near_tangency: bool,
}

impl<T: Real> Intersection<T> {
    /// Curve parameter of the first pass through the point.
    pub fn param_a(&self) -> T {
        T::from_usize(self.seg_a).unwrap() + self.s_a
    }

    /// Curve parameter of the second pass through the point.
    pub fn param_b(&self) -> T {
        T::from_usize(self.seg_b).unwrap() + self.s_b
    }
}

/// True when segments `i` and `j` share a vertex or are the same segment.
fn adjacent(i: usize, j: usize, n: usize) -> bool {
    let d = (i + n - j) % n;
    d <= 1 || d == n - 1
}

struct RawCrossing<T> {
    point: Point<T>,
    seg_a: usize,
    s_a: T,
    seg_b: usize,
    s_b: T,
    angle: T,
}

/// Transverse intersection of two segments, if any. Parallel overlaps are
/// not reported; they have no single crossing point.
fn segment_crossing<T: Real>(
    p1: Point<T>,
    p2: Point<T>,
    p3: Point<T>,
    p4: Point<T>,
) -> Option<(Point<T>, T, T, T)> {
    let d1 = p2 - p1;
    let d2 = p4 - p3;
    let denom = d1.cross(d2);
    let scale = d1.norm() * d2.norm();
    if denom.abs() <= scale * T::of(1e-300) {
        return None;
    }
    let w = p3 - p1;
    let s = w.cross(d2) / denom;
    let t = w.cross(d1) / denom;
    let zero = T::zero();
    let one = T::one();
    if s < zero || s > one || t < zero || t > one {
        return None;
    }
    let point = p1.lerp(p2, s);
    let angle = angle_between(d1, d2);
    let crossing_angle = angle.min(T::PI() - angle);
    Some((point, s, t, crossing_angle))
}

impl<T: Real> DiscreteCurve<T> {
    /// All transverse self-intersections of the curve.
    ///
    /// Crossings reported by several segment pairs because they fall within
    /// `tol` of a shared vertex are merged into one. Distinct intersections
    /// that merely lie close to each other are kept separate (the region
    /// decomposition treats those as a triple point).
    ///
    /// `tol < 0` selects the default `1e-9 x curve diameter`.
    pub fn self_intersections(&self, tol: T) -> Vec<Intersection<T>> {
        let n = self.len();
        let tol = if tol < T::zero() {
            self.bounding_box().diameter() * T::of(MERGE_TOL_REL)
        } else {
            tol
        };

        let mut raw: Vec<RawCrossing<T>> = Vec::new();
        for i in 0..n {
            let (a1, a2) = self.segment(i);
            let (ix_min, ix_max) = minmax(a1.x, a2.x);
            let (iy_min, iy_max) = minmax(a1.y, a2.y);
            for j in (i + 1)..n {
                if adjacent(i, j, n) {
                    continue;
                }
                let (b1, b2) = self.segment(j);
                if b1.x.max(b2.x) < ix_min
                    || b1.x.min(b2.x) > ix_max
                    || b1.y.max(b2.y) < iy_min
                    || b1.y.min(b2.y) > iy_max
                {
                    continue;
                }
                if let Some((point, s, t, angle)) = segment_crossing(a1, a2, b1, b2) {
                    raw.push(RawCrossing {
                        point,
                        seg_a: i,
                        s_a: s,
                        seg_b: j,
                        s_b: t,
                        angle,
                    });
                }
            }
        }

        merge_duplicates(raw, tol, n)
    }
}

fn minmax<T: Real>(a: T, b: T) -> (T, T) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Two raw crossings describe the same geometric intersection when their
/// points are within `tol` and, on each branch, the involved segments are
/// equal or adjacent (a crossing near a vertex is seen by both incident
/// segments).
fn same_crossing<T: Real>(a: &RawCrossing<T>, b: &RawCrossing<T>, tol: T, n: usize) -> bool {
    if a.point.dist(b.point) > tol {
        return false;
    }
    let direct = adjacent(a.seg_a, b.seg_a, n) && adjacent(a.seg_b, b.seg_b, n);
    let swapped = adjacent(a.seg_a, b.seg_b, n) && adjacent(a.seg_b, b.seg_a, n);
    direct || swapped
}

fn merge_duplicates<T: Real>(
    raw: Vec<RawCrossing<T>>,
    tol: T,
    n: usize,
) -> Vec<Intersection<T>> {
    let m = raw.len();
    let mut cluster = vec![usize::MAX; m];
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for i in 0..m {
        if cluster[i] != usize::MAX {
            continue;
        }
        let id = clusters.len();
        let mut members = vec![i];
        cluster[i] = id;
        let mut cursor = 0;
        while cursor < members.len() {
            let a = members[cursor];
            cursor += 1;
            for j in (i + 1)..m {
                if cluster[j] == usize::MAX && same_crossing(&raw[a], &raw[j], tol, n) {
                    cluster[j] = id;
                    members.push(j);
                }
            }
        }
        clusters.push(members);
    }

    let mut out = Vec::with_capacity(clusters.len());
    for members in clusters {
        // representative: the crossing farthest from segment endpoints,
        // i.e. the most interior one
        let rep = *members
            .iter()
            .max_by(|&&a, &&b| {
                let qa = interiority(&raw[a]);
                let qb = interiority(&raw[b]);
                qa.partial_cmp(&qb).unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap();
        let mut point = Point::zero();
        for &k in &members {
            point = point + raw[k].point;
        }
        let count = T::from_usize(members.len()).unwrap();
        let r = &raw[rep];
        let angle = r.angle;
        out.push(Intersection {
            point: point / count,
            seg_a: r.seg_a,
            s_a: r.s_a,
            seg_b: r.seg_b,
            s_b: r.s_b,
            crossing_angle: angle,
            near_tangency: angle < T::of(NEAR_TANGENCY_ANGLE),
        });
    }
    out.sort_by(|a, b| {
        (a.seg_a, a.seg_b)
            .partial_cmp(&(b.seg_a, b.seg_b))
            .unwrap()
    });
    out
}

fn interiority<T: Real>(c: &RawCrossing<T>) -> T {
    let half = T::of(0.5);
    let da = half - (c.s_a - half).abs();
    let db = half - (c.s_b - half).abs();
    da.min(db)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::curve::DiscreteCurve;

    fn curve_from(f: impl Fn(f64) -> (f64, f64), n: usize) -> DiscreteCurve<f64> {
        let verts = (0..n)
            .map(|i| {
                let u = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                let (x, y) = f(u);
                Point::new(x, y)
            })
            .collect();
        DiscreteCurve::new(verts).unwrap()
    }

    #[test]
    fn convex_polygon_has_none() {
        let curve = curve_from(|u| (u.cos(), u.sin()), 64);
        assert!(curve.self_intersections(-1.0).is_empty());
    }

    #[test]
    fn figure_eight_has_one_at_origin() {
        let curve = curve_from(|u| (u.sin(), u.sin() * u.cos()), 1000);
        let xs = curve.self_intersections(-1.0);
        assert_eq!(xs.len(), 1);
        assert!(xs[0].point.norm() < 1e-4);
        assert!(!xs[0].near_tangency);
    }

    #[test]
    fn l_lambda_crosses_at_plus_minus_lambda() {
        let lambda = 0.5;
        let curve = curve_from(
            |u| (u.cos(), (u.cos() * u.cos() - lambda * lambda) * u.sin()),
            2000,
        );
        let xs = curve.self_intersections(-1.0);
        assert_eq!(xs.len(), 2, "expected 2 crossings, got {}", xs.len());
        let mut px: Vec<f64> = xs.iter().map(|c| c.point.x).collect();
        px.sort_by(f64::total_cmp);
        assert!((px[0] + 0.5).abs() < 2e-3, "left crossing at {}", px[0]);
        assert!((px[1] - 0.5).abs() < 2e-3, "right crossing at {}", px[1]);
        for c in &xs {
            assert!(c.point.y.abs() < 2e-3);
        }
    }

    #[test]
    fn crossing_through_vertex_merges_to_one() {
        // square-ish loop pinched so the second pass runs exactly through
        // a vertex of the first pass
        let verts = vec![
            Point::new(0.0, 0.0),
            Point::new(2.0, 2.0),
            Point::new(3.0, 2.0),
            Point::new(4.0, 1.0),
            Point::new(3.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(1.0, 1.0), // crossing point target
            Point::new(0.0, 2.0),
            Point::new(-1.0, 2.0),
            Point::new(-1.0, 0.5),
        ];
        let curve = DiscreteCurve::new(verts).unwrap();
        // segment 0 runs from (0,0) to (2,2) straight through vertex 6=(1,1)
        let xs = curve.self_intersections(-1.0);
        assert_eq!(xs.len(), 1, "crossings: {xs:?}");
        assert!(xs[0].point.dist(Point::new(1.0, 1.0)) < 1e-9);
    }

    #[test]
    fn near_tangency_is_flagged() {
        // two long nearly-parallel strands crossing at a tiny angle
        let eps = 5e-7;
        let verts = vec![
            Point::new(-1.0, 0.0),
            Point::new(1.0, eps * 2.0),
            Point::new(1.5, 1.0),
            Point::new(1.0, eps),
            Point::new(-1.0, eps),
            Point::new(-1.5, 1.0),
            Point::new(-1.6, 1.2),
            Point::new(-1.4, 1.4),
        ];
        let curve = DiscreteCurve::new(verts).unwrap();
        let xs = curve.self_intersections(-1.0);
        assert!(!xs.is_empty());
        assert!(
            xs.iter().any(|c| c.near_tangency),
            "no near-tangency flagged in {xs:?}"
        );
    }
}
