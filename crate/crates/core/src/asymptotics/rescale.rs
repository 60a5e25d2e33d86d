//! Anisotropic normalization of a curve to the square `[-1, 1]^2`.

use crate::error::{Error, Result};
use crate::geometry::{DiscreteCurve, Point};
use crate::scalar::Real;

/// Affine map sending the bounding box of the curve onto `[-1, 1]^2`:
/// each coordinate is centered and divided by its half-extent. Repeated
/// application is the identity up to floating point error.
pub fn cs_rescale<T: Real>(curve: &DiscreteCurve<T>) -> Result<DiscreteCurve<T>> {
    let b = curve.bounding_box();
    let w = b.width();
    let h = b.height();
    if !(w > T::zero()) || !(h > T::zero()) {
        return Err(Error::DegenerateBox {
            width: w.to_f64_lossy(),
            height: h.to_f64_lossy(),
        });
    }
    let c = b.center();
    let half_w = w / T::of(2.0);
    let half_h = h / T::of(2.0);
    let verts = curve
        .vertices()
        .iter()
        .map(|&p| Point::new((p.x - c.x) / half_w, (p.y - c.y) / half_h))
        .collect();
    DiscreteCurve::new(verts)
}
