//! Plane points and the small amount of vector algebra the crate needs.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::scalar::Real;

/// A point (or vector) in the plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point<T> {
    pub x: T,
    pub y: T,
}

impl<T: Real> Point<T> {
    pub fn new(x: T, y: T) -> Self {
        Point { x, y }
    }

    pub fn zero() -> Self {
        Point {
            x: T::zero(),
            y: T::zero(),
        }
    }

    /// Euclidean dot product.
    pub fn dot(self, other: Self) -> T {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the cross product of the two vectors.
    pub fn cross(self, other: Self) -> T {
        self.x * other.y - self.y * other.x
    }

    pub fn norm_sq(self) -> T {
        self.dot(self)
    }

    pub fn norm(self) -> T {
        self.norm_sq().sqrt()
    }

    pub fn dist(self, other: Self) -> T {
        (self - other).norm()
    }

    /// Unit vector in the direction of `self`; `None` for the zero vector.
    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        if n > T::zero() {
            Some(self / n)
        } else {
            None
        }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Linear interpolation `self + s (other - self)`.
    pub fn lerp(self, other: Self, s: T) -> Self {
        self + (other - self) * s
    }
}

impl<T: Real> Add for Point<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl<T: Real> Sub for Point<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl<T: Real> Mul<T> for Point<T> {
    type Output = Self;
    fn mul(self, rhs: T) -> Self {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

impl<T: Real> Div<T> for Point<T> {
    type Output = Self;
    fn div(self, rhs: T) -> Self {
        Point::new(self.x / rhs, self.y / rhs)
    }
}

impl<T: Real> Neg for Point<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Point::new(-self.x, -self.y)
    }
}

/// Signed angle from direction `a` to direction `b`, in `(-pi, pi]`.
pub fn signed_angle<T: Real>(a: Point<T>, b: Point<T>) -> T {
    a.cross(b).atan2(a.dot(b))
}

/// Unsigned angle between two directions, in `[0, pi]`.
pub fn angle_between<T: Real>(a: Point<T>, b: Point<T>) -> T {
    signed_angle(a, b).abs()
}
