//! Caloric polynomials: the polynomial solutions `U_m(t, x)` of the heat
//! equation with leading term `x^m`, and the Hermite-polynomial facts the
//! singularity analysis relies on.
//!
//! The coefficient of `x^(m-2k) t^k` is `m (m-1) ... (m-2k+1) / k!`, an
//! integer; coefficients are computed exactly in `i128` and only converted
//! to floating point for evaluation.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest degree whose coefficients stay within `i128`.
pub const MAX_EXACT_DEGREE: usize = 40;

/// The caloric polynomial of degree `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeatPolynomial {
    m: usize,
    /// `coeffs[k]` multiplies `x^(m-2k) t^k`, for `k = 0 ..= m/2`.
    coeffs: Vec<i128>,
}

impl HeatPolynomial {
    pub fn new(m: usize) -> Self {
        assert!(
            m <= MAX_EXACT_DEGREE,
            "degree {m} exceeds exact coefficient range"
        );
        let mut coeffs = Vec::with_capacity(m / 2 + 1);
        for k in 0..=(m / 2) {
            // falling factorial m (m-1) ... (m-2k+1), divided by k!
            let mut num: i128 = 1;
            for j in 0..(2 * k) {
                num = num.checked_mul((m - j) as i128).expect("coefficient overflow");
            }
            let mut fact: i128 = 1;
            for j in 1..=k {
                fact *= j as i128;
            }
            debug_assert_eq!(num % fact, 0);
            coeffs.push(num / fact);
        }
        HeatPolynomial { m, coeffs }
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    /// Exact integer coefficients of `x^(m-2k) t^k`, `k = 0 ..= m/2`.
    pub fn coefficients(&self) -> &[i128] {
        &self.coeffs
    }

    /// Evaluates `U_m(t, x)`.
    pub fn eval<T: Real>(&self, t: T, x: T) -> T {
        // Horner in t: sum_k c_k x^(m-2k) t^k with x^2 factored stepwise
        let mut acc = T::zero();
        for k in (0..self.coeffs.len()).rev() {
            let c = T::of(self.coeffs[k] as f64);
            let x_pow = pow_usize(x, self.m - 2 * k);
            acc = acc + c * x_pow * pow_usize(t, k);
        }
        acc
    }

    /// Maximum absolute coefficient mismatch between `dU/dt` and
    /// `d2U/dx2`, computed exactly. Zero for every caloric polynomial.
    pub fn heat_residual(&self) -> i128 {
        let m = self.m;
        let mut worst: i128 = 0;
        // both derivatives are combinations of x^(m-2k) t^(k-1)
        for k in 1..=(m / 2) {
            let from_t = (k as i128) * self.coeffs[k];
            let p = m - 2 * (k - 1); // x-power of coeffs[k-1]
            let from_xx = self.coeffs[k - 1] * (p as i128) * ((p - 1) as i128);
            worst = worst.max((from_t - from_xx).abs());
        }
        worst
    }

    /// Real zeros of `x -> U_m(t, x)`, sorted ascending.
    ///
    /// For `t < 0` there are exactly `m` simple zeros. For `t > 0` the only
    /// zero is `x = 0`, and only when `m` is odd.
    pub fn zeros<T: Real>(&self, t: T) -> Result<Vec<T>> {
        if t == T::zero() {
            return Err(Error::InvalidConfig(
                "zero set of U_m(0, x) is degenerate".into(),
            ));
        }
        if self.m == 0 {
            return Ok(Vec::new());
        }
        if t > T::zero() {
            return Ok(if self.m % 2 == 1 {
                vec![T::zero()]
            } else {
                Vec::new()
            });
        }

        // t < 0: the zeros of U_k interlace with those of U_{k-1} because
        // dU_k/dx = k U_{k-1}; refine degree by degree with bisection.
        let sqrt_mt = (-t).sqrt();
        let mut roots: Vec<T> = vec![T::zero()]; // zeros of U_1
        for k in 2..=self.m {
            let poly = HeatPolynomial::new(k);
            // outer bound on all zeros in x-units
            let bound = T::of(2.0) * sqrt_mt * T::of((4.0 * k as f64 + 2.0).sqrt() + 1.0);
            let mut brackets = Vec::with_capacity(k);
            let mut edges = Vec::with_capacity(k + 1);
            edges.push(-bound);
            edges.extend(roots.iter().copied());
            edges.push(bound);
            for w in edges.windows(2) {
                brackets.push((w[0], w[1]));
            }
            let mut next = Vec::with_capacity(k);
            for (lo, hi) in brackets {
                next.push(bisect_root(&poly, t, lo, hi)?);
            }
            roots = next;
        }
        Ok(roots)
    }
}

fn pow_usize<T: Real>(x: T, p: usize) -> T {
    let mut acc = T::one();
    for _ in 0..p {
        acc = acc * x;
    }
    acc
}

fn bisect_root<T: Real>(poly: &HeatPolynomial, t: T, mut lo: T, mut hi: T) -> Result<T> {
    let mut f_lo = poly.eval(t, lo);
    let f_hi = poly.eval(t, hi);
    if f_lo == T::zero() {
        return Ok(lo);
    }
    if f_hi == T::zero() {
        return Ok(hi);
    }
    if (f_lo > T::zero()) == (f_hi > T::zero()) {
        return Err(Error::NumericalFailure(format!(
            "no sign change for U_{} in bracket [{lo}, {hi}]",
            poly.degree()
        )));
    }
    for _ in 0..200 {
        let mid = (lo + hi) / T::of(2.0);
        if mid == lo || mid == hi {
            break;
        }
        let f_mid = poly.eval(t, mid);
        if f_mid == T::zero() {
            return Ok(mid);
        }
        if (f_mid > T::zero()) == (f_lo > T::zero()) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) / T::of(2.0))
}

/// Evaluates the Hermite polynomial `H_m(z) := U_m(-1, 2z)`, the
/// eigenfunction normalization used throughout the rescaled analysis.
pub fn hermite_eval<T: Real>(m: usize, z: T) -> T {
    HeatPolynomial::new(m).eval(-T::one(), T::of(2.0) * z)
}

/// The largest zero `z_m` of `H_m`, i.e. half the largest zero of
/// `U_m(-1, x)`. Zero for `m = 1`.
pub fn largest_hermite_zero<T: Real>(m: usize) -> Result<T> {
    assert!(m >= 1, "largest zero needs m >= 1");
    let poly = HeatPolynomial::new(m);
    let roots = poly.zeros(-T::one())?;
    Ok(*roots.last().unwrap() / T::of(2.0))
}
