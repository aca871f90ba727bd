//! Iterative linear MPC on the kinematic bicycle.
//!
//! States here are ordered (x, y, v, yaw) and inputs (accel, steer).

use std::f64::consts::FRAC_PI_2;

use super::qp::{qp_solve_admm, AdmmParams, Qp};
use crate::error::{NavError, Result};
use crate::navcore::linalg::Mat;
use crate::navcore::wrap;

#[derive(Debug, Clone, PartialEq)]
pub struct MpcParams {
    pub horizon: usize,
    pub q: Mat,
    pub qf: Mat,
    pub r: Mat,
    pub rd: Mat,
    pub a_max: f64,
    pub steer_max: f64,
    /// rad/s; the per-step bound is dsteer_max * dt.
    pub dsteer_max: f64,
    pub max_outer_iters: usize,
    pub du_tol: f64,
    pub qp: AdmmParams,
}

impl Default for MpcParams {
    fn default() -> Self {
        let q = Mat::from_diag(&[1.0, 1.0, 0.5, 0.5]);
        MpcParams {
            horizon: 5,
            qf: q.clone(),
            q,
            r: Mat::from_diag(&[0.01, 0.01]),
            rd: Mat::from_diag(&[0.01, 1.0]),
            a_max: 1.0,
            steer_max: 0.44,
            dsteer_max: 0.52,
            max_outer_iters: 3,
            du_tol: 0.1,
            qp: AdmmParams::default(),
        }
    }
}

impl MpcParams {
    fn validate(&self) -> Result<()> {
        if self.horizon == 0 || self.max_outer_iters == 0 {
            return Err(NavError::invalid(
                "horizon and outer iterations must be at least 1",
            ));
        }
        if self.q.shape() != (4, 4)
            || self.qf.shape() != (4, 4)
            || self.r.shape() != (2, 2)
            || self.rd.shape() != (2, 2)
        {
            return Err(NavError::invalid("Q, Qf must be 4x4 and R, Rd 2x2"));
        }
        if !(self.a_max > 0.0 && self.steer_max > 0.0 && self.dsteer_max > 0.0 && self.du_tol > 0.0)
        {
            return Err(NavError::invalid(
                "MPC bounds and tolerance must be positive",
            ));
        }
        if self.steer_max >= FRAC_PI_2 - 1e-6 {
            return Err(NavError::invalid("steer_max must stay below pi/2"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MpcOutput {
    pub accel: f64,
    pub steer: f64,
    /// Optimized (accel, steer) over the horizon; a warm start for the next call.
    pub inputs: Vec<(f64, f64)>,
    /// Nonlinear rollout of `inputs`, T + 1 states starting at the current one.
    pub predicted: Vec<[f64; 4]>,
    pub outer_iterations: usize,
}

fn step(z: &[f64; 4], accel: f64, steer: f64, wheelbase: f64, dt: f64) -> [f64; 4] {
    let [x, y, v, yaw] = *z;
    [
        x + v * yaw.cos() * dt,
        y + v * yaw.sin() * dt,
        v + accel * dt,
        yaw + v * steer.tan() / wheelbase * dt,
    ]
}

fn rollout(z0: &[f64; 4], inputs: &[(f64, f64)], wheelbase: f64, dt: f64) -> Vec<[f64; 4]> {
    let mut out = vec![*z0];
    for &(a, d) in inputs {
        let next = step(out.last().expect("non-empty"), a, d, wheelbase, dt);
        out.push(next);
    }
    out
}

/// First-order expansion of the discrete bicycle map around `(op_state,
/// op_steer)`: `next ~ A z + B u + c`, exact at the operating point for any
/// acceleration.
pub fn linearize_bicycle(
    op_state: &[f64; 4],
    op_steer: f64,
    wheelbase: f64,
    dt: f64,
) -> Result<(Mat, Mat, Vec<f64>)> {
    if !(dt > 0.0) || !(wheelbase > 0.0) {
        return Err(NavError::invalid("dt and wheelbase must be positive"));
    }
    if !(op_steer.abs() <= FRAC_PI_2 - 1e-6) {
        return Err(NavError::invalid(format!(
            "steer {op_steer} outside (-pi/2, pi/2)"
        )));
    }
    let [_, _, v, yaw] = *op_state;
    let (s, c) = yaw.sin_cos();
    let mut a = Mat::identity(4);
    a[(0, 2)] = c * dt;
    a[(0, 3)] = -v * s * dt;
    a[(1, 2)] = s * dt;
    a[(1, 3)] = v * c * dt;
    a[(3, 2)] = op_steer.tan() / wheelbase * dt;
    let mut b = Mat::zeros(4, 2);
    b[(2, 0)] = dt;
    b[(3, 1)] = v * dt / (wheelbase * op_steer.cos().powi(2));

    let f = step(op_state, 0.0, op_steer, wheelbase, dt);
    let az = a.mat_vec(op_state);
    let bu = b.mat_vec(&[0.0, op_steer]);
    let offset = (0..4).map(|i| f[i] - az[i] - bu[i]).collect();
    Ok((a, b, offset))
}

/// Reference yaws shifted by whole turns so each is within pi of its predecessor,
/// starting from the vehicle yaw.
fn unwrap_reference(yaw_now: f64, reference: &[[f64; 4]]) -> Vec<[f64; 4]> {
    let mut prev = yaw_now;
    reference
        .iter()
        .map(|r| {
            let yaw = prev + wrap(r[3] - prev);
            prev = yaw;
            [r[0], r[1], r[2], yaw]
        })
        .collect()
}

/// Builds the condensed QP over U = (a_0, d_0, ..., a_{T-1}, d_{T-1}) for the
/// linearization along `nominal`.
fn build_qp(
    z0: &[f64; 4],
    nominal: &[[f64; 4]],
    inputs: &[(f64, f64)],
    reference: &[[f64; 4]],
    p: &MpcParams,
    wheelbase: f64,
    dt: f64,
) -> Result<Qp> {
    let t_len = p.horizon;
    let n = 2 * t_len;
    // z_t = s_t + M_t U
    let mut s = z0.to_vec();
    let mut m = Mat::zeros(4, n);
    let mut hess = Mat::zeros(n, n);
    let mut grad = vec![0.0; n];
    for t in 0..t_len {
        let (a, b, c) = linearize_bicycle(&nominal[t], inputs[t].1, wheelbase, dt)?;
        let as_ = a.mat_vec(&s);
        s = (0..4).map(|i| as_[i] + c[i]).collect();
        m = &a * &m;
        for i in 0..4 {
            m[(i, 2 * t)] += b[(i, 0)];
            m[(i, 2 * t + 1)] += b[(i, 1)];
        }
        let w = if t + 1 == t_len { &p.qf } else { &p.q };
        let mt = m.transpose();
        let mtw = &mt * w;
        hess = &hess + &(&mtw * &m);
        let err: Vec<f64> = (0..4).map(|i| s[i] - reference[t + 1][i]).collect();
        let g = mtw.mat_vec(&err);
        for (gi, v) in grad.iter_mut().zip(g) {
            *gi += v;
        }
    }
    for t in 0..t_len {
        for i in 0..2 {
            for j in 0..2 {
                hess[(2 * t + i, 2 * t + j)] += p.r[(i, j)];
            }
        }
    }
    for t in 0..t_len.saturating_sub(1) {
        // (u_{t+1} - u_t)' Rd (u_{t+1} - u_t)
        for i in 0..2 {
            for j in 0..2 {
                let w = p.rd[(i, j)];
                hess[(2 * t + i, 2 * t + j)] += w;
                hess[(2 * t + 2 + i, 2 * t + 2 + j)] += w;
                hess[(2 * t + i, 2 * t + 2 + j)] -= w;
                hess[(2 * t + 2 + i, 2 * t + j)] -= w;
            }
        }
    }
    let mut hess = hess.scale(2.0);
    hess.symmetrize();
    let grad: Vec<f64> = grad.into_iter().map(|g| 2.0 * g).collect();

    let rows = n + t_len.saturating_sub(1);
    let mut a = Mat::zeros(rows, n);
    let mut lo = Vec::with_capacity(rows);
    let mut hi = Vec::with_capacity(rows);
    for t in 0..t_len {
        a[(2 * t, 2 * t)] = 1.0;
        a[(2 * t + 1, 2 * t + 1)] = 1.0;
        lo.extend([-p.a_max, -p.steer_max]);
        hi.extend([p.a_max, p.steer_max]);
    }
    let ds = p.dsteer_max * dt;
    for t in 0..t_len.saturating_sub(1) {
        a[(n + t, 2 * t + 1)] = -1.0;
        a[(n + t, 2 * t + 3)] = 1.0;
        lo.push(-ds);
        hi.push(ds);
    }
    Qp::new(hess, grad, a, lo, hi)
}

/// One MPC control step.
///
/// `state` is (x, y, v, yaw); `reference` holds T + 1 states in the same
/// order, the first aligned with the current time. `warm` seeds the input
/// sequence (zeros otherwise). Inputs come from the bound-projected ADMM
/// iterate, so active limits are hit exactly.
pub fn mpc_track_step(
    state: &[f64; 4],
    reference: &[[f64; 4]],
    p: &MpcParams,
    wheelbase: f64,
    dt: f64,
    warm: Option<&[(f64, f64)]>,
) -> Result<MpcOutput> {
    p.validate()?;
    if reference.len() != p.horizon + 1 {
        return Err(NavError::invalid(format!(
            "reference window has {} points, horizon needs {}",
            reference.len(),
            p.horizon + 1
        )));
    }
    if !(dt > 0.0) || !(wheelbase > 0.0) {
        return Err(NavError::invalid("dt and wheelbase must be positive"));
    }
    let reference = unwrap_reference(state[3], reference);
    let mut inputs: Vec<(f64, f64)> = match warm {
        Some(w) if w.len() == p.horizon => w
            .iter()
            .map(|&(a, d)| {
                (
                    a.clamp(-p.a_max, p.a_max),
                    d.clamp(-p.steer_max, p.steer_max),
                )
            })
            .collect(),
        Some(w) => {
            return Err(NavError::invalid(format!(
                "warm start has {} inputs, expected {}",
                w.len(),
                p.horizon
            )));
        }
        None => vec![(0.0, 0.0); p.horizon],
    };

    let mut outer = 0;
    while outer < p.max_outer_iters {
        outer += 1;
        let nominal = rollout(state, &inputs, wheelbase, dt);
        let qp = build_qp(state, &nominal, &inputs, &reference, p, wheelbase, dt)?;
        let sol = qp_solve_admm(&qp, &p.qp)?.ok()?;
        let next: Vec<(f64, f64)> = (0..p.horizon)
            .map(|t| {
                (
                    sol.z[2 * t].clamp(-p.a_max, p.a_max),
                    sol.z[2 * t + 1].clamp(-p.steer_max, p.steer_max),
                )
            })
            .collect();
        let du = inputs
            .iter()
            .zip(&next)
            .map(|(a, b)| (a.0 - b.0).abs().max((a.1 - b.1).abs()))
            .fold(0.0, f64::max);
        inputs = next;
        if du < p.du_tol {
            break;
        }
    }
    let predicted = rollout(state, &inputs, wheelbase, dt);
    Ok(MpcOutput {
        accel: inputs[0].0,
        steer: inputs[0].1,
        inputs,
        predicted,
        outer_iterations: outer,
    })
}
