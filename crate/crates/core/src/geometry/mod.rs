//! Discrete representation of closed immersed plane curves and the
//! geometric and topological measurements taken on them.
//!
//! All operations here are pure functions of their inputs; every value is
//! immutable after construction and safe to share across threads.

mod curve;
mod intersect;
mod point;
mod topology;

pub use curve::{BoundingBox, DiscreteCurve, DEGENERACY_REL, MIN_VERTICES};
pub use intersect::{Intersection, MERGE_TOL_REL, NEAR_TANGENCY_ANGLE};
pub use point::{angle_between, signed_angle, Point};
pub use topology::{region_area, shoelace_area, CornerKind, CurveTopology, Region, RegionKind};
