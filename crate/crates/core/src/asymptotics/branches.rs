//! Splitting a curve into its two graph branches `y = +-u(x)`.
//!
//! The n-loop solutions stay unions of two graphs over the x-axis; the
//! profile diagnostics need `u(t, x)` sampled from the polygon. The curve
//! is split at its extreme-x vertices, each half must be x-monotone, and
//! values are read off by linear interpolation.

use crate::error::{Error, Result};
use crate::geometry::DiscreteCurve;
use crate::scalar::Real;

/// One x-monotone branch, stored with ascending x.
#[derive(Clone, Debug)]
pub struct Branch<T> {
    pub xs: Vec<T>,
    pub ys: Vec<T>,
}

impl<T: Real> Branch<T> {
    /// Linear interpolation of the branch at `x`; `None` outside the
    /// sampled range.
    pub fn eval(&self, x: T) -> Option<T> {
        let n = self.xs.len();
        if x < self.xs[0] || x > self.xs[n - 1] {
            return None;
        }
        let mut lo = 0usize;
        let mut hi = n - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.xs[mid] <= x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let dx = self.xs[hi] - self.xs[lo];
        if dx == T::zero() {
            return Some(self.ys[lo]);
        }
        let s = (x - self.xs[lo]) / dx;
        Some(self.ys[lo] + (self.ys[hi] - self.ys[lo]) * s)
    }

    /// The x-interval `[lo, hi]` that survives trimming `margin_frac` of
    /// the span off each end; features outside it are cap artifacts.
    fn trimmed_range(&self, margin_frac: T) -> (T, T) {
        let lo = self.xs[0];
        let hi = self.xs[self.xs.len() - 1];
        let pad = (hi - lo) * margin_frac;
        (lo + pad, hi - pad)
    }

    /// x-positions of the interior local extrema of the branch, keeping
    /// only turns with at least `prominence` of rise and fall around them
    /// so floating point wiggle at the steep caps is ignored.
    pub fn interior_extrema(&self, prominence: T) -> Vec<T> {
        let n = self.xs.len();
        let mut out = Vec::new();
        if n < 3 {
            return out;
        }
        let mut dir = 0i8;
        let mut ext = 0usize; // candidate extremum since the last turn
        for i in 1..n {
            match dir {
                1 => {
                    if self.ys[i] > self.ys[ext] {
                        ext = i;
                    } else if self.ys[ext] - self.ys[i] > prominence {
                        if ext > 0 && ext < n - 1 {
                            out.push(self.xs[ext]);
                        }
                        dir = -1;
                        ext = i;
                    }
                }
                -1 => {
                    if self.ys[i] < self.ys[ext] {
                        ext = i;
                    } else if self.ys[i] - self.ys[ext] > prominence {
                        if ext > 0 && ext < n - 1 {
                            out.push(self.xs[ext]);
                        }
                        dir = 1;
                        ext = i;
                    }
                }
                _ => {
                    if self.ys[i] > self.ys[ext] + prominence {
                        dir = 1;
                        ext = i;
                    } else if self.ys[i] < self.ys[ext] - prominence {
                        dir = -1;
                        ext = i;
                    }
                }
            }
        }
        out
    }

    /// Prominence floor derived from the branch's own vertical extent.
    pub fn default_prominence(&self) -> T {
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for &y in &self.ys {
            lo = lo.min(y);
            hi = hi.max(y);
        }
        (hi - lo) * T::of(1e-6)
    }

    /// x-positions of the interior sign changes of the branch, by linear
    /// interpolation, sorted ascending, ignoring a `margin_frac` fraction
    /// of the span at each end.
    pub fn interior_zeros(&self, margin_frac: T) -> Vec<T> {
        let mut out = Vec::new();
        let (lo, hi) = self.trimmed_range(margin_frac);
        for i in 1..self.xs.len() {
            let (y0, y1) = (self.ys[i - 1], self.ys[i]);
            if y0 == T::zero() {
                continue;
            }
            if (y0 > T::zero()) != (y1 > T::zero()) {
                let s = y0 / (y0 - y1);
                let x = self.xs[i - 1] + (self.xs[i] - self.xs[i - 1]) * s;
                if x >= lo && x <= hi {
                    out.push(x);
                }
            }
        }
        out
    }
}

/// The two graph branches of a curve, plus its horizontal extent.
#[derive(Clone, Debug)]
pub struct TwoGraphs<T> {
    /// Branch walked from the maximum-x vertex to the minimum-x vertex.
    pub upper: Branch<T>,
    /// The complementary branch.
    pub lower: Branch<T>,
    pub x_min: T,
    pub x_max: T,
}

impl<T: Real> TwoGraphs<T> {
    pub fn center(&self) -> T {
        (self.x_min + self.x_max) / T::of(2.0)
    }

    /// Half-width of the curve.
    pub fn half_width(&self) -> T {
        (self.x_max - self.x_min) / T::of(2.0)
    }
}

/// Splits the curve at its extreme-x vertices into two x-monotone chains.
///
/// Fails with [`Error::NotGraphLike`] when a chain backtracks in x by more
/// than `1e-12` of the curve width, i.e. when the curve is not a union of
/// two graphs.
pub fn extract_branches<T: Real>(curve: &DiscreteCurve<T>) -> Result<TwoGraphs<T>> {
    let n = curve.len();
    let verts = curve.vertices();
    let mut i_min = 0usize;
    let mut i_max = 0usize;
    for i in 1..n {
        if verts[i].x < verts[i_min].x {
            i_min = i;
        }
        if verts[i].x > verts[i_max].x {
            i_max = i;
        }
    }
    if i_min == i_max {
        return Err(Error::NotGraphLike("curve has zero width".into()));
    }
    let width = verts[i_max].x - verts[i_min].x;
    let slack = width * T::of(1e-9);

    let chain = |from: usize, to: usize| -> Result<Branch<T>> {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        let mut i = from;
        loop {
            let v = curve.vertex(i);
            xs.push(v.x);
            ys.push(v.y);
            if i % n == to {
                break;
            }
            i += 1;
            if i > from + n {
                return Err(Error::NotGraphLike("chain failed to close".into()));
            }
        }
        Ok(Branch { xs, ys })
    };

    // walk from the max-x vertex forward to the min-x vertex, and on to
    // the max again; each half must be monotone in x
    let mut first = chain(i_max, i_min)?;
    let second = chain(i_min, i_max)?;

    let check_monotone = |b: &Branch<T>, descending: bool| -> Result<()> {
        for i in 1..b.xs.len() {
            let step = b.xs[i] - b.xs[i - 1];
            let bad = if descending { step > slack } else { step < -slack };
            if bad {
                return Err(Error::NotGraphLike(format!(
                    "x backtracks by {:e} at chain index {i}",
                    step.abs().to_f64_lossy()
                )));
            }
        }
        Ok(())
    };
    check_monotone(&first, true)?;
    check_monotone(&second, false)?;

    // store both ascending in x
    first.xs.reverse();
    first.ys.reverse();
    let dedupe = |b: &mut Branch<T>| {
        let mut xs = Vec::with_capacity(b.xs.len());
        let mut ys = Vec::with_capacity(b.ys.len());
        for i in 0..b.xs.len() {
            if let Some(&last) = xs.last() {
                if b.xs[i] <= last {
                    continue;
                }
            }
            xs.push(b.xs[i]);
            ys.push(b.ys[i]);
        }
        b.xs = xs;
        b.ys = ys;
    };
    let mut upper = first;
    let mut lower = second;
    dedupe(&mut upper);
    dedupe(&mut lower);
    if upper.xs.len() < 2 || lower.xs.len() < 2 {
        return Err(Error::NotGraphLike("branch collapsed to a point".into()));
    }

    Ok(TwoGraphs {
        upper,
        lower,
        x_min: verts[i_min].x,
        x_max: verts[i_max].x,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    #[test]
    fn circle_splits_into_two_half_arcs() {
        let c = families::circle::<f64>(1.0, 256).unwrap();
        let g = extract_branches(&c).unwrap();
        assert!((g.half_width() - 1.0).abs() < 1e-3);
        // at x = 0 the two branches sit at +-1
        let u = g.upper.eval(0.0).unwrap();
        let l = g.lower.eval(0.0).unwrap();
        assert!((u.abs() - 1.0).abs() < 1e-3);
        assert!((l.abs() - 1.0).abs() < 1e-3);
        assert!((u + l).abs() < 1e-8, "branches should be mirror images");
    }

    #[test]
    fn three_loop_branch_structure() {
        let c = families::trig_three_loop::<f64>(0.45, 2000).unwrap();
        let g = extract_branches(&c).unwrap();
        // two ear extrema and the central one on each branch
        let ext = g.upper.interior_extrema(g.upper.default_prominence());
        assert_eq!(ext.len(), 3, "extrema at {ext:?}");
        // interior zeros at +-sqrt(1/lambda - 2)
        let zeros = g.upper.interior_zeros(0.01);
        assert_eq!(zeros.len(), 2, "zeros at {zeros:?}");
        let expect = (1.0f64 / 0.45 - 2.0).sqrt();
        assert!((zeros[0] + expect).abs() < 1e-3);
        assert!((zeros[1] - expect).abs() < 1e-3);
    }

    #[test]
    fn figure_eight_is_the_two_loop_graph_union() {
        // (sin u, sin u cos u) is y = +-x sqrt(1 - x^2)
        let c = families::figure_eight::<f64>(512).unwrap();
        let g = extract_branches(&c).unwrap();
        assert_eq!(g.upper.interior_zeros(0.01).len(), 1);
        assert_eq!(g.upper.interior_extrema(g.upper.default_prominence()).len(), 2);
    }

    #[test]
    fn limacon_is_not_graph_like() {
        // inner loop: vertical lines hit the curve four times
        use crate::geometry::{DiscreteCurve, Point};
        let n = 512;
        let verts = (0..n)
            .map(|i| {
                let th = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                let r = 1.0 + 2.0 * th.cos();
                Point::new(r * th.cos(), r * th.sin())
            })
            .collect();
        let c = DiscreteCurve::new(verts).unwrap();
        assert!(matches!(
            extract_branches(&c),
            Err(Error::NotGraphLike(_))
        ));
    }
}
