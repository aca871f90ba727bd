use super::linalg::{solve_spd, Mat};
use crate::error::{NavError, Result};

const DARE_TOL: f64 = 1e-10;
const DARE_MAX_ITER: usize = 10_000;

/// Infinite-horizon discrete LQR: returns (P, K) with
/// `P = A'PA - A'PB (R + B'PB)^-1 B'PA + Q` and `K = (R + B'PB)^-1 B'PA`.
///
/// Fixed-point iteration from `P0 = Q`, stopping when no entry of P moves by
/// more than 1e-10.
pub fn solve_dare(a: &Mat, b: &Mat, q: &Mat, r: &Mat) -> Result<(Mat, Mat)> {
    let n = a.rows();
    let m = b.cols();
    if !a.is_square() || b.rows() != n || q.shape() != (n, n) || r.shape() != (m, m) {
        return Err(NavError::invalid(format!(
            "inconsistent DARE dimensions: A {:?}, B {:?}, Q {:?}, R {:?}",
            a.shape(),
            b.shape(),
            q.shape(),
            r.shape()
        )));
    }
    let at = a.transpose();
    let bt = b.transpose();
    let mut p = q.clone();
    let mut delta = f64::INFINITY;
    for _ in 0..DARE_MAX_ITER {
        let (next, _) = riccati_step(&p, a, &at, b, &bt, q, r)?;
        delta = (&next - &p).max_abs();
        p = next;
        if delta < DARE_TOL {
            let k = lqr_gain(&p, a, b, &bt, r)?;
            return Ok((p, k));
        }
        if !delta.is_finite() {
            break;
        }
    }
    Err(NavError::NoConvergence {
        what: "DARE fixed-point iteration",
        iterations: DARE_MAX_ITER,
        residual: delta,
    })
}

fn lqr_gain(p: &Mat, a: &Mat, b: &Mat, bt: &Mat, r: &Mat) -> Result<Mat> {
    let btp = bt * p;
    let mut s = r + &(&btp * b);
    s.symmetrize();
    solve_spd(&s, &(&btp * a))
}

fn riccati_step(
    p: &Mat,
    a: &Mat,
    at: &Mat,
    b: &Mat,
    bt: &Mat,
    q: &Mat,
    r: &Mat,
) -> Result<(Mat, Mat)> {
    let k = lqr_gain(p, a, b, bt, r)?;
    let atp = at * p;
    let mut next = &(&(&atp * a) - &(&(&atp * b) * &k)) + q;
    next.symmetrize();
    Ok((next, k))
}

/// Elementwise residual of the DARE at `p`.
pub fn dare_residual(p: &Mat, a: &Mat, b: &Mat, q: &Mat, r: &Mat) -> Result<f64> {
    let (next, _) = riccati_step(p, a, &a.transpose(), b, &b.transpose(), q, r)?;
    Ok((&next - p).max_abs())
}
