//! Closed polygonal curves and the measurements taken directly on them.

use crate::error::{Error, Result};
use crate::geometry::point::{signed_angle, Point};
use crate::scalar::Real;

/// Minimum number of vertices of a [`DiscreteCurve`].
pub const MIN_VERTICES: usize = 8;

/// Relative threshold below which a segment counts as degenerate,
/// measured against the curve diameter.
pub const DEGENERACY_REL: f64 = 1e-14;

/// A closed immersed plane curve, approximated by a cyclic polygon.
///
/// Vertex indices are taken modulo `N`: vertex `i` and vertex `i + N` are
/// the same point. Consecutive vertices are distinct, so every segment has
/// positive length. Values are immutable after construction.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteCurve<T> {
    vertices: Vec<Point<T>>,
}

impl<T: Real> DiscreteCurve<T> {
    /// Builds a curve from its vertex list (without a repeated closing
    /// vertex), validating the structural invariants.
    pub fn new(vertices: Vec<Point<T>>) -> Result<Self> {
        if vertices.len() < MIN_VERTICES {
            return Err(Error::InvalidCurve(format!(
                "need at least {MIN_VERTICES} vertices, got {}",
                vertices.len()
            )));
        }
        for (i, v) in vertices.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::InvalidCurve(format!(
                    "vertex {i} has non-finite coordinates"
                )));
            }
        }
        let n = vertices.len();
        for i in 0..n {
            if vertices[i] == vertices[(i + 1) % n] {
                return Err(Error::InvalidCurve(format!(
                    "vertices {i} and {} coincide",
                    (i + 1) % n
                )));
            }
        }
        Ok(DiscreteCurve { vertices })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vertices(&self) -> &[Point<T>] {
        &self.vertices
    }

    /// Vertex `i`, index taken modulo `N`.
    pub fn vertex(&self, i: usize) -> Point<T> {
        self.vertices[i % self.vertices.len()]
    }

    /// The directed segment from vertex `i` to vertex `i + 1`.
    pub fn segment(&self, i: usize) -> (Point<T>, Point<T>) {
        (self.vertex(i), self.vertex(i + 1))
    }

    /// Direction vector of segment `i` (not normalized).
    pub fn segment_vector(&self, i: usize) -> Point<T> {
        let (a, b) = self.segment(i);
        b - a
    }

    /// Point at curve parameter `p` in `[0, N)`: vertex `floor(p)` moved a
    /// fraction `p - floor(p)` along its segment.
    pub fn point_at(&self, p: T) -> Point<T> {
        let n = self.vertices.len();
        let nf = T::from_usize(n).unwrap();
        let mut p = p % nf;
        if p < T::zero() {
            p = p + nf;
        }
        let i = p.floor().to_usize().unwrap_or(0) % n;
        let s = p - p.floor();
        let (a, b) = self.segment(i);
        a.lerp(b, s)
    }

    /// Tight axis-aligned bounding box over the vertices.
    pub fn bounding_box(&self) -> BoundingBox<T> {
        let mut x_min = self.vertices[0].x;
        let mut x_max = x_min;
        let mut y_min = self.vertices[0].y;
        let mut y_max = y_min;
        for v in &self.vertices[1..] {
            x_min = x_min.min(v.x);
            x_max = x_max.max(v.x);
            y_min = y_min.min(v.y);
            y_max = y_max.max(v.y);
        }
        BoundingBox {
            x_min,
            x_max,
            y_min,
            y_max,
        }
    }

    /// Squared lengths of all segments.
    pub fn segment_lengths_sq(&self) -> Vec<T> {
        (0..self.len())
            .map(|i| self.segment_vector(i).norm_sq())
            .collect()
    }

    /// Discrete velocity of the reparametrized flow at every vertex:
    /// the second difference divided by the symmetric squared-segment
    /// average. Its normal component is the curvature vector, and for a
    /// regular polygon it points to the center with magnitude `1/r`.
    pub fn curvature_vectors(&self) -> Result<Vec<Point<T>>> {
        let n = self.len();
        let diameter = self.bounding_box().diameter();
        let floor = diameter * T::of(DEGENERACY_REL);
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let prev = self.vertex(i + n - 1);
            let here = self.vertex(i);
            let next = self.vertex(i + 1);
            let fwd = next - here;
            let bwd = here - prev;
            let denom = fwd.norm_sq() + bwd.norm_sq();
            let min_len = fwd.norm().min(bwd.norm());
            if min_len <= floor {
                return Err(Error::DegenerateSegment {
                    index: i,
                    length: min_len.to_f64_lossy(),
                });
            }
            let k = (fwd - bwd) * (T::of(2.0) / denom);
            if !k.is_finite() {
                return Err(Error::NumericalFailure(format!(
                    "non-finite curvature at vertex {i}"
                )));
            }
            out.push(k);
        }
        Ok(out)
    }

    /// Total rotation of the tangent divided by `2 pi`; an integer for any
    /// closed polygon without reversals.
    pub fn turning_number(&self) -> i64 {
        let n = self.len();
        let mut total = T::zero();
        for i in 0..n {
            let prev = self.segment_vector((i + n - 1) % n);
            let here = self.segment_vector(i);
            total = total + signed_angle(prev, here);
        }
        let turns = total / (T::of(2.0) * T::PI());
        turns.round().to_i64().unwrap_or(0)
    }

    /// Number of transverse crossings of the curve with the vertical line
    /// `x = x0`, counted with the half-open convention so that vertices
    /// lying exactly on the line are not double counted.
    pub fn vertical_crossings(&self, x0: T) -> usize {
        let n = self.len();
        let mut count = 0;
        for i in 0..n {
            let a = self.vertex(i).x < x0;
            let b = self.vertex(i + 1).x < x0;
            if a != b {
                count += 1;
            }
        }
        count
    }
}

/// Axis-aligned bounding box of a curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundingBox<T> {
    pub x_min: T,
    pub x_max: T,
    pub y_min: T,
    pub y_max: T,
}

impl<T: Real> BoundingBox<T> {
    pub fn width(&self) -> T {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> T {
        self.y_max - self.y_min
    }

    /// Diagonal of the box, the diameter of the enclosed point set.
    pub fn diameter(&self) -> T {
        self.width().hypot(self.height())
    }

    pub fn center(&self) -> Point<T> {
        Point::new(
            (self.x_min + self.x_max) / T::of(2.0),
            (self.y_min + self.y_max) / T::of(2.0),
        )
    }

    pub fn contains(&self, p: Point<T>) -> bool {
        p.x >= self.x_min && p.x <= self.x_max && p.y >= self.y_min && p.y <= self.y_max
    }
}
