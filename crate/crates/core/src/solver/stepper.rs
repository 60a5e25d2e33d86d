//! Allocation-free inner loop for [`evolve`](super::evolve).
//!
//! One step factors the cyclic tridiagonal matrix once and back-solves
//! three right-hand sides (x, y, and the rank-one correction vector); all
//! buffers are reused across steps.

#![allow(clippy::needless_range_loop)]

use crate::geometry::Point;
use crate::scalar::Real;

pub(super) struct StepOutcome<T> {
    pub dt: T,
    pub max_k: T,
}

pub(super) enum StepResult<T> {
    Advanced(StepOutcome<T>),
    /// Respecting the coefficient cap needs a step below `dt_min`.
    DtUnderflow,
    /// Degenerate segments, a singular solve, or non-finite output.
    Degenerate,
}

pub(super) struct Stepper<T> {
    n: usize,
    len_sq: Vec<T>,
    ks: Vec<T>,
    /// Modified diagonal of the conditioned system.
    diag_mod: Vec<T>,
    inv_bet: Vec<T>,
    gam: Vec<T>,
    sol_x: Vec<T>,
    sol_y: Vec<T>,
    z: Vec<T>,
}

impl<T: Real> Stepper<T> {
    pub fn new(n: usize) -> Self {
        Stepper {
            n,
            len_sq: vec![T::zero(); n],
            ks: vec![T::zero(); n],
            diag_mod: vec![T::zero(); n],
            inv_bet: vec![T::zero(); n],
            gam: vec![T::zero(); n],
            sol_x: vec![T::zero(); n],
            sol_y: vec![T::zero(); n],
            z: vec![T::zero(); n],
        }
    }

    /// Advances `cur` into `next` by one implicit step, choosing the step
    /// size from the coefficient cap; `cur` is untouched on failure.
    pub fn advance(
        &mut self,
        cur: &[Point<T>],
        next: &mut [Point<T>],
        k_cap: T,
        dt_min: T,
        dt_max: T,
    ) -> StepResult<T> {
        let n = self.n;
        debug_assert_eq!(cur.len(), n);

        let mut min_sum = T::infinity();
        let mut prev = cur[n - 1];
        for i in 0..n {
            let d = cur[i] - prev;
            self.len_sq[i] = d.norm_sq();
            prev = cur[i];
        }
        // len_sq[i] is now |g_i - g_{i-1}|^2; pair i with i+1 for the
        // symmetric average around vertex i
        for i in 0..n - 1 {
            let s = self.len_sq[i] + self.len_sq[i + 1];
            if s < min_sum {
                min_sum = s;
            }
        }
        min_sum = min_sum.min(self.len_sq[n - 1] + self.len_sq[0]);
        if !(min_sum > T::zero()) || !min_sum.is_finite() {
            return StepResult::Degenerate;
        }
        let dt = (T::of(0.45) * k_cap * min_sum).min(dt_max);
        if dt < dt_min {
            return StepResult::DtUnderflow;
        }

        let two_dt = T::of(2.0) * dt;
        let mut max_k = T::zero();
        for i in 0..n - 1 {
            let k = two_dt / (self.len_sq[i] + self.len_sq[i + 1]);
            self.ks[i] = k;
            if k > max_k {
                max_k = k;
            }
        }
        let k_last = two_dt / (self.len_sq[n - 1] + self.len_sq[0]);
        self.ks[n - 1] = k_last;
        max_k = max_k.max(k_last);

        // conditioned cyclic system; rows are (-k, 1+2k, -k)
        let one = T::one();
        let two = T::of(2.0);
        for i in 0..n {
            self.diag_mod[i] = one + two * self.ks[i];
        }
        let gamma = -self.diag_mod[0];
        let top_right = -self.ks[0];
        let bottom_left = -self.ks[n - 1];
        self.diag_mod[0] = self.diag_mod[0] - gamma;
        self.diag_mod[n - 1] = self.diag_mod[n - 1] - top_right * bottom_left / gamma;

        // Thomas factorization shared by the three right-hand sides,
        // then forward and backward sweeps with x, y and the rank-one
        // vector interleaved: the recurrences are latency-bound, so
        // keeping three chains in flight pays off. Unchecked indexing:
        // every index below is in 0..n and the buffers have length n.
        unsafe {
            let ks = self.ks.as_ptr();
            let diag_mod = self.diag_mod.as_ptr();
            let inv_bet = self.inv_bet.as_mut_ptr();
            let gam = self.gam.as_mut_ptr();
            let sol_x = self.sol_x.as_mut_ptr();
            let sol_y = self.sol_y.as_mut_ptr();
            let z = self.z.as_mut_ptr();

            let mut bet = *diag_mod;
            *inv_bet = one / bet;
            for j in 1..n {
                let g = -*ks.add(j - 1) * *inv_bet.add(j - 1);
                *gam.add(j) = g;
                bet = *diag_mod.add(j) + *ks.add(j) * g;
                if bet == T::zero() {
                    return StepResult::Degenerate;
                }
                *inv_bet.add(j) = one / bet;
            }

            *sol_x = cur.get_unchecked(0).x * *inv_bet;
            *sol_y = cur.get_unchecked(0).y * *inv_bet;
            *z = gamma * *inv_bet;
            for j in 1..n - 1 {
                let k = *ks.add(j);
                let ib = *inv_bet.add(j);
                let p = cur.get_unchecked(j);
                *sol_x.add(j) = (p.x + k * *sol_x.add(j - 1)) * ib;
                *sol_y.add(j) = (p.y + k * *sol_y.add(j - 1)) * ib;
                *z.add(j) = k * *z.add(j - 1) * ib;
            }
            {
                let j = n - 1;
                let k = *ks.add(j);
                let ib = *inv_bet.add(j);
                let p = cur.get_unchecked(j);
                *sol_x.add(j) = (p.x + k * *sol_x.add(j - 1)) * ib;
                *sol_y.add(j) = (p.y + k * *sol_y.add(j - 1)) * ib;
                *z.add(j) = (bottom_left + k * *z.add(j - 1)) * ib;
            }
            for j in (0..n - 1).rev() {
                let g = *gam.add(j + 1);
                *sol_x.add(j) = *sol_x.add(j) - g * *sol_x.add(j + 1);
                *sol_y.add(j) = *sol_y.add(j) - g * *sol_y.add(j + 1);
                *z.add(j) = *z.add(j) - g * *z.add(j + 1);
            }
        }

        let ratio = top_right / gamma;
        let denom = one + self.z[0] + ratio * self.z[n - 1];
        if denom == T::zero() || !denom.is_finite() {
            return StepResult::Degenerate;
        }
        let fx = (self.sol_x[0] + ratio * self.sol_x[n - 1]) / denom;
        let fy = (self.sol_y[0] + ratio * self.sol_y[n - 1]) / denom;

        for i in 0..n {
            let p = Point::new(self.sol_x[i] - fx * self.z[i], self.sol_y[i] - fy * self.z[i]);
            if !p.is_finite() {
                return StepResult::Degenerate;
            }
            next[i] = p;
        }
        StepResult::Advanced(StepOutcome { dt, max_k })
    }
}
