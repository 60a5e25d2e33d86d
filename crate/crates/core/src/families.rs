//! The initial-curve families fed to the flow solver.
//!
//! All families are sampled uniformly in parameter at `u = 2 pi i / N`;
//! the scheme's built-in tangential motion keeps the parametrization
//! usable, so no arclength redistribution is done. When `N` is divisible
//! by four, a quarter of the samples is evaluated and the rest is filled
//! in by reflection, so the stated mirror symmetries hold exactly on the
//! vertex multiset.

use crate::error::{Error, Result};
use crate::geometry::{DiscreteCurve, Point};
use crate::scalar::Real;

/// Minimum sample count for a family build.
pub const MIN_FAMILY_POINTS: usize = 64;

/// Which initial curve to construct.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family<T> {
    Circle { r: T },
    Ellipse { a: T, b: T },
    FigureEight,
    LLambda,
    MLambda,
    TrigThreeLoop,
}

/// A fully specified initial curve: family, parameter, sample count.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FamilySpec<T> {
    pub family: Family<T>,
    /// Family parameter for the one-parameter families; ignored otherwise.
    pub lambda: Option<T>,
    pub n_points: usize,
}

impl<T: Real> FamilySpec<T> {
    pub fn build(&self) -> Result<DiscreteCurve<T>> {
        if self.n_points < MIN_FAMILY_POINTS {
            return Err(Error::InvalidConfig(format!(
                "families need at least {MIN_FAMILY_POINTS} points, got {}",
                self.n_points
            )));
        }
        let n = self.n_points;
        let lambda = || {
            self.lambda.ok_or_else(|| {
                Error::InvalidConfig("this family needs a lambda parameter".into())
            })
        };
        match self.family {
            Family::Circle { r } => circle(r, n),
            Family::Ellipse { a, b } => ellipse(a, b, n),
            Family::FigureEight => figure_eight(n),
            Family::LLambda => l_lambda(lambda()?, n),
            Family::MLambda => m_lambda(lambda()?, n),
            Family::TrigThreeLoop => trig_three_loop(lambda()?, n),
        }
    }
}

/// Circle of radius `r`.
pub fn circle<T: Real>(r: T, n: usize) -> Result<DiscreteCurve<T>> {
    if !(r > T::zero()) {
        return Err(Error::InvalidConfig("circle radius must be positive".into()));
    }
    direct(n, |u: T| Point::new(r * u.cos(), r * u.sin()))
}

/// Axis-aligned ellipse with semi-axes `a` and `b`.
pub fn ellipse<T: Real>(a: T, b: T, n: usize) -> Result<DiscreteCurve<T>> {
    if !(a > T::zero() && b > T::zero()) {
        return Err(Error::InvalidConfig("ellipse semi-axes must be positive".into()));
    }
    direct(n, |u: T| Point::new(a * u.cos(), b * u.sin()))
}

/// The symmetric figure-eight `(sin u, sin u cos u)`, point-symmetric
/// through the origin with one self-intersection there.
pub fn figure_eight<T: Real>(n: usize) -> Result<DiscreteCurve<T>> {
    let eval = |u: T| Point::new(u.sin(), u.sin() * u.cos());
    let quarter_end = Point::new(T::one(), T::zero()); // u = pi/2 exactly
    mirrored(
        n,
        eval,
        quarter_end,
        |p| Point::new(p.x, -p.y),  // u -> pi - u
        |p| Point::new(-p.x, -p.y), // u -> 2 pi - u
    )
}

/// The two-loops-and-an-eye family
/// `L_lambda(u) = (cos u, (cos^2 u - lambda^2) sin u)`, which crosses
/// itself transversely at `(+-lambda, 0)` for `lambda` in `(0, 1)` and has
/// a self-tangency at the origin for `lambda = 0`.
pub fn l_lambda<T: Real>(lambda: T, n: usize) -> Result<DiscreteCurve<T>> {
    let lam = lambda.to_f64_lossy();
    if !(0.0..1.0).contains(&lam) {
        return Err(Error::LambdaOutOfRange {
            lambda: lam,
            range: "[0, 1)",
        });
    }
    let l2 = lambda * lambda;
    let eval = move |u: T| {
        let c = u.cos();
        Point::new(c, (c * c - l2) * u.sin())
    };
    let quarter_end = Point::new(T::zero(), -l2); // u = pi/2 exactly
    mirrored(
        n,
        eval,
        quarter_end,
        |p| Point::new(-p.x, p.y), // u -> pi - u
        |p| Point::new(p.x, -p.y), // u -> 2 pi - u
    )
}

/// The two-eyes-and-two-ears family
/// `M_lambda(u) = (cos u, sin u cos u (cos^2 u - lambda^2))`.
///
/// Its trace satisfies `y^2 = x^2 (1 - x^2) (x^2 - lambda^2)^2`: the same
/// zero set `|x| in {0, lambda, 1}` and band structure as the quartic
/// `y^2 = x^2 (1 - x^2)(x^2 - lambda^2)`, but with transverse crossings at
/// `(0, 0)` and `(+-lambda, 0)` instead of tangential band contacts, so a
/// single immersed traversal exists. Odd in the sense that the union of
/// its two graphs is `y = +-f(x)` with `f` odd.
pub fn m_lambda<T: Real>(lambda: T, n: usize) -> Result<DiscreteCurve<T>> {
    let lam = lambda.to_f64_lossy();
    if !(lam > 0.0 && lam < 1.0) {
        return Err(Error::LambdaOutOfRange {
            lambda: lam,
            range: "(0, 1)",
        });
    }
    let l2 = lambda * lambda;
    let eval = move |u: T| {
        let c = u.cos();
        let s = u.sin();
        Point::new(c, s * c * (c * c - l2))
    };
    let quarter_end = Point::new(T::zero(), T::zero()); // u = pi/2: origin crossing
    mirrored(
        n,
        eval,
        quarter_end,
        |p| Point::new(-p.x, -p.y), // u -> pi - u
        |p| Point::new(p.x, -p.y),  // u -> 2 pi - u
    )
}

/// The three-loop trigonometric family
/// `x = sin t, y = (1 - lambda (2 + sin^2 t)) cos t`.
///
/// For `lambda` in `(1/3, 1/2)` the curve is a 3-loop with two transverse
/// crossings on the x-axis; below `1/3` and above `1/2` it is embedded.
pub fn trig_three_loop<T: Real>(lambda: T, n: usize) -> Result<DiscreteCurve<T>> {
    let lam = lambda.to_f64_lossy();
    if !(0.0..1.0).contains(&lam) {
        return Err(Error::LambdaOutOfRange {
            lambda: lam,
            range: "[0, 1)",
        });
    }
    let two = T::of(2.0);
    let eval = move |u: T| {
        let s = u.sin();
        let c = u.cos();
        Point::new(s, (T::one() - lambda * (two + s * s)) * c)
    };
    let quarter_end = Point::new(T::one(), T::zero()); // u = pi/2 exactly
    mirrored(
        n,
        eval,
        quarter_end,
        |p| Point::new(p.x, -p.y),  // u -> pi - u
        |p| Point::new(-p.x, p.y),  // u -> 2 pi - u
    )
}

fn direct<T: Real>(n: usize, eval: impl Fn(T) -> Point<T>) -> Result<DiscreteCurve<T>> {
    let tau = T::of(2.0) * T::PI();
    let nf = T::from_usize(n).ok_or_else(|| Error::InvalidConfig("bad sample count".into()))?;
    let verts = (0..n)
        .map(|i| eval(tau * T::from_usize(i).unwrap() / nf))
        .collect();
    DiscreteCurve::new(verts)
}

/// Samples `eval` on the first quarter period and fills the rest of the
/// curve by the two reflections, so the advertised symmetries hold exactly
/// on the vertex multiset. `quarter_end` replaces the floating point
/// evaluation at `u = pi/2`, where the analytic value is exact.
///
/// `second_quarter` maps the point at `u` to the one at `pi - u`;
/// `second_half` maps the point at `u` to the one at `2 pi - u`.
fn mirrored<T: Real>(
    n: usize,
    eval: impl Fn(T) -> Point<T>,
    quarter_end: Point<T>,
    second_quarter: impl Fn(Point<T>) -> Point<T>,
    second_half: impl Fn(Point<T>) -> Point<T>,
) -> Result<DiscreteCurve<T>> {
    if n % 4 != 0 {
        return direct(n, eval);
    }
    let q = n / 4;
    let tau = T::of(2.0) * T::PI();
    let nf = T::from_usize(n).unwrap();

    let mut verts = vec![Point::zero(); n];
    for (i, v) in verts.iter_mut().enumerate().take(q) {
        *v = eval(tau * T::from_usize(i).unwrap() / nf);
    }
    verts[q] = quarter_end;
    for i in (q + 1)..=(2 * q) {
        verts[i] = second_quarter(verts[2 * q - i]);
    }
    for i in (2 * q + 1)..n {
        verts[i] = second_half(verts[n - i]);
    }
    DiscreteCurve::new(verts)
}
