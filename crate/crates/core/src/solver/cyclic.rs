//! Cyclic tridiagonal linear systems, solved with two tridiagonal sweeps
//! and a rank-one corner correction (Sherman-Morrison).

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::scalar::Real;

/// Solves the non-cyclic tridiagonal system in place via the Thomas
/// algorithm. `sub[0]` and `sup[n-1]` are ignored.
fn thomas<T: Real>(sub: &[T], diag: &[T], sup: &[T], rhs: &[T]) -> Result<Vec<T>> {
    let n = diag.len();
    let mut gam = vec![T::zero(); n];
    let mut x = vec![T::zero(); n];

    let mut bet = diag[0];
    if bet == T::zero() {
        return Err(Error::IllConditioned("zero pivot in tridiagonal sweep".into()));
    }
    x[0] = rhs[0] / bet;
    for j in 1..n {
        gam[j] = sup[j - 1] / bet;
        bet = diag[j] - sub[j] * gam[j];
        if bet == T::zero() {
            return Err(Error::IllConditioned("zero pivot in tridiagonal sweep".into()));
        }
        x[j] = (rhs[j] - sub[j] * x[j - 1]) / bet;
    }
    for j in (0..n - 1).rev() {
        let next = x[j + 1];
        x[j] = x[j] - gam[j + 1] * next;
    }
    Ok(x)
}

/// Solves the cyclic tridiagonal system
///
/// ```text
/// sub[i] x[i-1] + diag[i] x[i] + sup[i] x[i+1] = rhs[i]   (indices mod N)
/// ```
///
/// where `sub[0]` couples to `x[N-1]` and `sup[N-1]` couples to `x[0]`.
/// Requires strict diagonal dominance, `|diag| > |sub| + |sup|` per row.
pub fn solve_cyclic_tridiagonal<T: Real>(
    sub: &[T],
    diag: &[T],
    sup: &[T],
    rhs: &[T],
) -> Result<Vec<T>> {
    let n = diag.len();
    if n < 3 || sub.len() != n || sup.len() != n || rhs.len() != n {
        return Err(Error::IllConditioned(format!(
            "cyclic system needs equally sized bands with n >= 3, got n = {n}"
        )));
    }
    for i in 0..n {
        if diag[i].abs() <= sub[i].abs() + sup[i].abs() {
            return Err(Error::IllConditioned(format!(
                "row {i} not strictly diagonally dominant"
            )));
        }
    }

    // corner entries: row 0 couples to x[n-1] through sub[0] (top-right),
    // row n-1 couples to x[0] through sup[n-1] (bottom-left)
    let top_right = sub[0];
    let bottom_left = sup[n - 1];

    // condition the modified system with gamma = -diag[0]
    let gamma = -diag[0];
    let mut diag_mod = diag.to_vec();
    diag_mod[0] = diag[0] - gamma;
    diag_mod[n - 1] = diag[n - 1] - top_right * bottom_left / gamma;

    let x = thomas(sub, &diag_mod, sup, rhs)?;

    let mut u = vec![T::zero(); n];
    u[0] = gamma;
    u[n - 1] = bottom_left;
    let z = thomas(sub, &diag_mod, sup, &u)?;

    let ratio = top_right / gamma;
    let denom = T::one() + z[0] + ratio * z[n - 1];
    if denom == T::zero() || !denom.is_finite() {
        return Err(Error::IllConditioned(
            "singular rank-one correction in cyclic solve".into(),
        ));
    }
    let factor = (x[0] + ratio * x[n - 1]) / denom;

    Ok(x.iter().zip(&z).map(|(&xi, &zi)| xi - factor * zi).collect())
}

/// Solves the cyclic system for a right-hand side of plane points,
/// coordinate by coordinate.
pub fn solve_cyclic_tridiagonal_points<T: Real>(
    sub: &[T],
    diag: &[T],
    sup: &[T],
    rhs: &[Point<T>],
) -> Result<Vec<Point<T>>> {
    let xs: Vec<T> = rhs.iter().map(|p| p.x).collect();
    let ys: Vec<T> = rhs.iter().map(|p| p.y).collect();
    let sol_x = solve_cyclic_tridiagonal(sub, diag, sup, &xs)?;
    let sol_y = solve_cyclic_tridiagonal(sub, diag, sup, &ys)?;
    Ok(sol_x
        .into_iter()
        .zip(sol_y)
        .map(|(x, y)| Point::new(x, y))
        .collect())
}

/// Residual `max_i |(A x)_i - rhs_i|` of a candidate solution of the
/// cyclic system.
pub fn cyclic_residual<T: Real>(sub: &[T], diag: &[T], sup: &[T], rhs: &[T], x: &[T]) -> T {
    let n = diag.len();
    let mut worst = T::zero();
    for i in 0..n {
        let prev = x[(i + n - 1) % n];
        let next = x[(i + 1) % n];
        let r = sub[i] * prev + diag[i] * x[i] + sup[i] * next - rhs[i];
        worst = worst.max(r.abs());
    }
    worst
}
