//! Dense ADMM for `min 0.5 x'Px + q'x  s.t.  l <= Ax <= u`.

use crate::error::{NavError, Result};
use crate::navcore::linalg::{cholesky, cholesky_solve, Mat};

#[derive(Debug, Clone, PartialEq)]
pub struct Qp {
    pub p: Mat,
    pub q: Vec<f64>,
    pub a: Mat,
    pub l: Vec<f64>,
    pub u: Vec<f64>,
}

impl Qp {
    pub fn new(p: Mat, q: Vec<f64>, a: Mat, l: Vec<f64>, u: Vec<f64>) -> Result<Self> {
        let n = q.len();
        let m = l.len();
        if p.shape() != (n, n) || a.shape() != (m, n) || u.len() != m {
            return Err(NavError::invalid(format!(
                "QP shapes disagree: P {:?}, q {n}, A {:?}, l {m}, u {}",
                p.shape(),
                a.shape(),
                u.len()
            )));
        }
        if p.asymmetry() > 1e-9 * (1.0 + p.max_abs()) {
            return Err(NavError::invalid("P is not symmetric"));
        }
        if l.iter().zip(&u).any(|(lo, hi)| !(lo <= hi)) {
            return Err(NavError::invalid("lower bound above upper bound"));
        }
        Ok(Qp { p, q, a, l, u })
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        let px = self.p.mat_vec(x);
        x.iter().zip(&px).map(|(a, b)| 0.5 * a * b).sum::<f64>()
            + x.iter().zip(&self.q).map(|(a, b)| a * b).sum::<f64>()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmmParams {
    pub rho: f64,
    pub sigma: f64,
    pub alpha: f64,
    pub max_iter: usize,
    pub eps: f64,
}

impl Default for AdmmParams {
    fn default() -> Self {
        AdmmParams {
            rho: 1.0,
            sigma: 1e-6,
            alpha: 1.6,
            max_iter: 4000,
            eps: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QpStatus {
    Solved,
    MaxIterReached,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QpSolution {
    pub x: Vec<f64>,
    /// Projection of Ax onto [l, u]; always inside the bounds.
    pub z: Vec<f64>,
    pub y: Vec<f64>,
    pub status: QpStatus,
    pub iterations: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
}

impl QpSolution {
    /// `NoConvergence` unless the tolerances were met.
    pub fn ok(self) -> Result<Self> {
        match self.status {
            QpStatus::Solved => Ok(self),
            QpStatus::MaxIterReached => Err(NavError::NoConvergence {
                what: "ADMM QP",
                iterations: self.iterations,
                residual: self.primal_residual.max(self.dual_residual),
            }),
        }
    }
}

fn inf_norm(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Operator-splitting iteration with fixed penalty and over-relaxation.
///
/// Running out of iterations is not an error here: the last iterate comes
/// back tagged `MaxIterReached` (see [`QpSolution::ok`]).
pub fn qp_solve_admm(qp: &Qp, params: &AdmmParams) -> Result<QpSolution> {
    let AdmmParams {
        rho,
        sigma,
        alpha,
        max_iter,
        eps,
    } = *params;
    if !(rho > 0.0 && sigma > 0.0 && alpha > 0.0 && alpha < 2.0 && eps > 0.0) {
        return Err(NavError::invalid(
            "ADMM needs rho, sigma, eps > 0 and alpha in (0, 2)",
        ));
    }
    let n = qp.q.len();
    let m = qp.l.len();
    let at = qp.a.transpose();
    let mut kkt = &(&qp.p + &Mat::identity(n).scale(sigma)) + &(&at * &qp.a).scale(rho);
    kkt.symmetrize();
    let chol =
        cholesky(&kkt).map_err(|e| NavError::NumericalFailure(format!("ADMM system: {e}")))?;

    let mut x = vec![0.0; n];
    let mut z = vec![0.0; m];
    let mut y = vec![0.0; m];
    let mut primal = f64::INFINITY;
    let mut dual = f64::INFINITY;
    for it in 1..=max_iter {
        let rhs_z: Vec<f64> = (0..m).map(|i| rho * z[i] - y[i]).collect();
        let at_rz = at.mat_vec(&rhs_z);
        let rhs: Vec<f64> = (0..n).map(|i| sigma * x[i] - qp.q[i] + at_rz[i]).collect();
        let x_tilde = cholesky_solve(&chol, &Mat::column(&rhs)).into_vec();
        let z_tilde = qp.a.mat_vec(&x_tilde);

        for i in 0..n {
            x[i] = alpha * x_tilde[i] + (1.0 - alpha) * x[i];
        }
        for i in 0..m {
            let relaxed = alpha * z_tilde[i] + (1.0 - alpha) * z[i];
            let z_new = (relaxed + y[i] / rho).clamp(qp.l[i], qp.u[i]);
            y[i] += rho * (relaxed - z_new);
            z[i] = z_new;
        }

        let ax = qp.a.mat_vec(&x);
        primal = inf_norm((0..m).map(|i| ax[i] - z[i]));
        let px = qp.p.mat_vec(&x);
        let aty = at.mat_vec(&y);
        dual = inf_norm((0..n).map(|i| px[i] + qp.q[i] + aty[i]));
        if primal < eps && dual < eps {
            return Ok(QpSolution {
                x,
                z,
                y,
                status: QpStatus::Solved,
                iterations: it,
                primal_residual: primal,
                dual_residual: dual,
            });
        }
    }
    Ok(QpSolution {
        x,
        z,
        y,
        status: QpStatus::MaxIterReached,
        iterations: max_iter,
        primal_residual: primal,
        dual_residual: dual,
    })
}
