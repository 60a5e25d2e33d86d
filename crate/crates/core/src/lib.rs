//! Plane curve shortening flow on closed polygonal curves.
//!
//! The crate evolves closed immersed curves by the semi-implicit
//! discretization of the reparametrized flow, measures their geometry and
//! self-intersection topology along the way, generates the classical
//! initial-curve families, and fits the caloric-polynomial asymptotics
//! that describe how multi-loop curves collapse into a singular point.
//!
//! Everything is generic over the scalar type through [`scalar::Real`]
//! (`f32` or `f64`); the `*64` aliases below pin the default precision.

// negated comparisons like `!(x > eps)` are deliberate: they also catch
// NaN, which the suggested rewrite would silently accept
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::manual_is_multiple_of)]

pub mod asymptotics;
pub mod error;
pub mod families;
pub mod geometry;
pub mod scalar;
pub mod solver;

pub use error::{Error, Result};
pub use scalar::Real;

/// Default-precision aliases.
pub type Point64 = geometry::Point<f64>;
pub type Curve64 = geometry::DiscreteCurve<f64>;
pub type BoundingBox64 = geometry::BoundingBox<f64>;
pub type Topology64 = geometry::CurveTopology<f64>;
pub type SolverConfig64 = solver::SolverConfig<f64>;
pub type Snapshot64 = solver::FlowSnapshot<f64>;
pub type Trajectory64 = solver::Trajectory<f64>;
pub type FamilySpec64 = families::FamilySpec<f64>;
pub type ProfileFit64 = asymptotics::ProfileFit<f64>;
