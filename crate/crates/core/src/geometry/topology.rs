//! Region decomposition of an immersed curve: loops, eyes, corner angles,
//! enclosed areas and the turning number.

use crate::error::{Error, Result};
use crate::geometry::curve::DiscreteCurve;
use crate::geometry::intersect::Intersection;
use crate::geometry::point::{angle_between, signed_angle, Point};
use crate::scalar::Real;

/// Corner class of a loop region.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CornerKind {
    /// Corner angle in `(pi, 2 pi)`.
    Convex,
    /// Corner angle in `(2 pi, 3 pi)`.
    Concave,
}

/// What kind of region a piece of the complement is.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegionKind {
    /// A simple closed sub-path with exactly one corner at a
    /// self-intersection.
    Loop(CornerKind),
    /// Two simple arcs sharing both endpoints.
    Eye,
}

/// A bounded region cut out by the self-intersections of the curve.
#[derive(Clone, Debug)]
pub struct Region<T> {
    pub kind: RegionKind,
    /// Closed boundary polygon (first vertex not repeated).
    pub boundary: Vec<Point<T>>,
    /// Shoelace area of the boundary polygon.
    pub area: T,
    /// One angle for a loop, two for an eye, in radians.
    pub corner_angles: Vec<T>,
}

/// Self-intersections, regions and the turning number of a curve.
#[derive(Clone, Debug)]
pub struct CurveTopology<T> {
    pub intersections: Vec<Intersection<T>>,
    pub regions: Vec<Region<T>>,
    pub turning_number: i64,
}

impl<T: Real> CurveTopology<T> {
    /// Regions that are loops.
    pub fn loops(&self) -> impl Iterator<Item = &Region<T>> {
        self.regions
            .iter()
            .filter(|r| matches!(r.kind, RegionKind::Loop(_)))
    }

    /// Regions that are eyes.
    pub fn eyes(&self) -> impl Iterator<Item = &Region<T>> {
        self.regions.iter().filter(|r| r.kind == RegionKind::Eye)
    }
}

/// Unsigned shoelace area of a simple closed polygon (first vertex not
/// repeated). Fails with [`Error::NonSimpleBoundary`] when the boundary
/// intersects itself.
pub fn region_area<T: Real>(polygon: &[Point<T>]) -> Result<T> {
    if polygon.len() < 3 {
        return Err(Error::NonSimpleBoundary);
    }
    if !polygon_is_simple(polygon) {
        return Err(Error::NonSimpleBoundary);
    }
    Ok(shoelace_area(polygon))
}

/// Unsigned shoelace area without the simplicity check; for boundaries that
/// are simple by construction.
pub fn shoelace_area<T: Real>(polygon: &[Point<T>]) -> T {
    let n = polygon.len();
    let mut twice = T::zero();
    for i in 0..n {
        let a = polygon[i];
        let b = polygon[(i + 1) % n];
        twice = twice + a.cross(b);
    }
    (twice / T::of(2.0)).abs()
}

fn polygon_is_simple<T: Real>(polygon: &[Point<T>]) -> bool {
    let n = polygon.len();
    for i in 0..n {
        let (a1, a2) = (polygon[i], polygon[(i + 1) % n]);
        for j in (i + 1)..n {
            let d = (i + n - j) % n;
            if d <= 1 || d == n - 1 {
                continue;
            }
            let (b1, b2) = (polygon[j], polygon[(j + 1) % n]);
            if segments_cross(a1, a2, b1, b2) {
                return false;
            }
        }
    }
    true
}

fn segments_cross<T: Real>(p1: Point<T>, p2: Point<T>, p3: Point<T>, p4: Point<T>) -> bool {
    let d1 = p2 - p1;
    let d2 = p4 - p3;
    let denom = d1.cross(d2);
    if denom == T::zero() {
        return false;
    }
    let w = p3 - p1;
    let s = w.cross(d2) / denom;
    let t = w.cross(d1) / denom;
    let zero = T::zero();
    let one = T::one();
    s >= zero && s <= one && t >= zero && t <= one
}

/// One pass of the curve through an intersection point.
#[derive(Clone, Copy, Debug)]
struct Breakpoint<T> {
    /// Curve parameter in `[0, N)`.
    param: T,
    /// Index into the intersections list.
    node: usize,
}

/// A maximal piece of the curve between two consecutive intersection
/// passes.
#[derive(Clone, Debug)]
struct Arc<T> {
    from: usize,
    to: usize,
    /// Boundary polyline including both intersection endpoints.
    points: Vec<Point<T>>,
    /// Signed total rotation of the tangent along the arc.
    turning: T,
    /// Tangent direction leaving the start intersection.
    dir_start: Point<T>,
    /// Tangent direction arriving at the end intersection.
    dir_end: Point<T>,
}

impl<T: Real> DiscreteCurve<T> {
    /// Decomposes the plane regions cut out by the given self-intersections
    /// into loops and eyes, and computes the turning number.
    ///
    /// `merge_tol < 0` selects the default `1e-9 x curve diameter`.
    /// Distinct intersections closer than the merge tolerance mean three
    /// branches meet near one point; that is reported as
    /// [`Error::TriplePoint`] rather than silently merged.
    pub fn decompose_regions(
        &self,
        intersections: &[Intersection<T>],
        merge_tol: T,
    ) -> Result<CurveTopology<T>> {
        let tol = if merge_tol < T::zero() {
            self.bounding_box().diameter() * T::of(crate::geometry::intersect::MERGE_TOL_REL)
        } else {
            merge_tol
        };
        for (i, a) in intersections.iter().enumerate() {
            for b in intersections.iter().skip(i + 1) {
                if a.point.dist(b.point) <= tol {
                    return Err(Error::TriplePoint {
                        x: a.point.x.to_f64_lossy(),
                        y: a.point.y.to_f64_lossy(),
                    });
                }
            }
        }

        let turning_number = self.turning_number();
        if intersections.is_empty() {
            return Ok(CurveTopology {
                intersections: Vec::new(),
                regions: Vec::new(),
                turning_number,
            });
        }

        let mut breakpoints: Vec<Breakpoint<T>> = Vec::with_capacity(2 * intersections.len());
        for (node, x) in intersections.iter().enumerate() {
            breakpoints.push(Breakpoint {
                param: self.canonical_param(x.param_a()),
                node,
            });
            breakpoints.push(Breakpoint {
                param: self.canonical_param(x.param_b()),
                node,
            });
        }
        breakpoints.sort_by(|a, b| a.param.partial_cmp(&b.param).unwrap());

        let arcs: Vec<Arc<T>> = (0..breakpoints.len())
            .map(|k| {
                let from = breakpoints[k];
                let to = breakpoints[(k + 1) % breakpoints.len()];
                self.build_arc(from, to, intersections)
            })
            .collect();

        let mut regions = Vec::new();
        // loops: arcs that return to the intersection they started from
        for arc in &arcs {
            if arc.from == arc.to {
                regions.push(self.loop_region(arc));
            }
        }
        // eyes: pairs of arcs joining the same two intersections
        let mut used = vec![false; arcs.len()];
        for i in 0..arcs.len() {
            if used[i] || arcs[i].from == arcs[i].to {
                continue;
            }
            let pair = (i + 1..arcs.len()).find(|&j| {
                !used[j]
                    && arcs[j].from != arcs[j].to
                    && ((arcs[j].from, arcs[j].to) == (arcs[i].to, arcs[i].from)
                        || (arcs[j].from, arcs[j].to) == (arcs[i].from, arcs[i].to))
            });
            if let Some(j) = pair {
                used[i] = true;
                used[j] = true;
                let reversed = arcs[j].from == arcs[i].from;
                regions.push(self.eye_region(&arcs[i], &arcs[j], reversed));
            }
        }

        Ok(CurveTopology {
            intersections: intersections.to_vec(),
            regions,
            turning_number,
        })
    }

    /// Normalizes a parameter to `[0, N)` with the fractional part in
    /// `[0, 1)`.
    fn canonical_param(&self, p: T) -> T {
        let nf = T::from_usize(self.len()).unwrap();
        let mut p = p % nf;
        if p < T::zero() {
            p = p + nf;
        }
        // a parameter that rounds up to exactly N wraps to 0
        if p >= nf {
            T::zero()
        } else {
            p
        }
    }

    fn build_arc(
        &self,
        from: Breakpoint<T>,
        to: Breakpoint<T>,
        intersections: &[Intersection<T>],
    ) -> Arc<T> {
        let n = self.len();
        let nf = T::from_usize(n).unwrap();
        let p_start = from.param;
        let mut p_end = to.param;
        if p_end <= p_start {
            p_end = p_end + nf;
        }

        let start_point = intersections[from.node].point;
        let end_point = intersections[to.node].point;

        let seg_start = p_start.floor().to_usize().unwrap() % n;
        let mut points = vec![start_point];
        let mut dirs = vec![self.segment_vector(seg_start)];

        // interior vertices strictly between the two parameters
        let mut k = p_start.floor().to_usize().unwrap() + 1;
        while T::from_usize(k).unwrap() < p_end {
            let v = self.vertex(k);
            if v.dist(*points.last().unwrap()) > T::zero() {
                points.push(v);
                dirs.push(self.segment_vector(k % n));
            }
            k += 1;
        }
        if end_point.dist(*points.last().unwrap()) > T::zero() {
            points.push(end_point);
        }

        let mut turning = T::zero();
        for w in dirs.windows(2) {
            turning = turning + signed_angle(w[0], w[1]);
        }

        Arc {
            from: from.node,
            to: to.node,


            points,
            turning,
            dir_start: dirs[0],
            dir_end: *dirs.last().unwrap(),
        }
    }

    fn loop_region(&self, arc: &Arc<T>) -> Region<T> {
        // total tangent rotation along the loop arc equals the corner
        // angle: between pi and 2 pi for a convex corner, between 2 pi and
        // 3 pi for a concave one
        let alpha = arc.turning.abs();
        let kind = if alpha <= T::of(2.0) * T::PI() {
            CornerKind::Convex
        } else {
            CornerKind::Concave
        };
        let mut boundary = arc.points.clone();
        if boundary.len() > 1 && boundary[0].dist(*boundary.last().unwrap()) == T::zero() {
            boundary.pop();
        }
        let area = shoelace_area(&boundary);
        Region {
            kind: RegionKind::Loop(kind),
            boundary,
            area,
            corner_angles: vec![alpha],
        }
    }

    fn eye_region(&self, a: &Arc<T>, b: &Arc<T>, b_same_direction: bool) -> Region<T> {
        // boundary: arc a forward, then arc b oriented so the walk returns
        // from a.to back to a.from
        let mut boundary = a.points.clone();
        boundary.pop();
        let mut tail = b.points.clone();
        if b_same_direction {
            tail.reverse();
        }
        tail.pop();
        boundary.extend(tail);
        let area = shoelace_area(&boundary);

        // interior corner angles between the tangents departing from the
        // corner into each of the two arcs
        let (b_dep_at_from, b_dep_at_to) = if b_same_direction {
            (b.dir_start, -b.dir_end)
        } else {
            (-b.dir_end, b.dir_start)
        };
        let at_shared_from = angle_between(a.dir_start, b_dep_at_from);
        let at_shared_to = angle_between(-a.dir_end, b_dep_at_to);
        Region {
            kind: RegionKind::Eye,
            boundary,
            area,
            corner_angles: vec![at_shared_from, at_shared_to],
        }
    }
}
