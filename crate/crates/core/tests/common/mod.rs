//! Independent reference implementations shared by the integration tests and
//! the acceptance harness. Nothing here calls the code it is checking.
#![allow(dead_code)]

use navsim::localization::HistogramBelief;
use navsim::navcore::{Mat, RngStream};
use navsim::planning::{GridCell, GridWorld};
use navsim::tracking::{linearize_bicycle, mpc_track_step, AdmmParams, MpcParams};

/// Solves a general square system by Gaussian elimination with partial pivoting.
#[allow(clippy::needless_range_loop)]
pub fn gauss_solve(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(r, &bi)| {
            let mut r = r.clone();
            r.push(bi);
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[piv][col].abs() < 1e-12 {
            return None;
        }
        m.swap(col, piv);
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            for c in col..=n {
                m[r][c] -= f * m[col][c];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| m[r][c] * x[c]).sum();
        x[r] = (m[r][n] - s) / m[r][r];
    }
    Some(x)
}

// ---------- histogram filter ----------

/// Shift then blur, written as a full transition matrix over all cells,
/// with off-grid mass dropped before renormalization.
pub fn histogram_predict_bayes(h: &HistogramBelief, shift: (i64, i64), std: f64) -> Vec<f64> {
    let (nx, ny) = (h.nx as i64, h.ny as i64);
    let kernel = |d: i64| -> f64 {
        if std <= 0.0 {
            return if d == 0 { 1.0 } else { 0.0 };
        }
        let r = (3.0 * std).ceil() as i64;
        if d.abs() > r {
            return 0.0;
        }
        let z: f64 = (-r..=r)
            .map(|k| (-0.5 * (k as f64 / std).powi(2)).exp())
            .sum();
        (-0.5 * (d as f64 / std).powi(2)).exp() / z
    };
    let mut out = vec![0.0; h.mass.len()];
    for sy in 0..ny {
        for sx in 0..nx {
            let (mx, my) = (sx + shift.0, sy + shift.1);
            if !(0..nx).contains(&mx) || !(0..ny).contains(&my) {
                continue;
            }
            let m = h.mass[(sy * nx + sx) as usize];
            for ty in 0..ny {
                for tx in 0..nx {
                    out[(ty * nx + tx) as usize] += m * kernel(tx - mx) * kernel(ty - my);
                }
            }
        }
    }
    let t: f64 = out.iter().sum();
    out.iter().map(|v| v / t).collect()
}

/// Posterior proportional to prior times the product of range likelihoods.
pub fn histogram_update_bayes(h: &HistogramBelief, z: &[((f64, f64), f64)], std: f64) -> Vec<f64> {
    let mut post = Vec::with_capacity(h.mass.len());
    for iy in 0..h.ny {
        for ix in 0..h.nx {
            let cx = h.origin.0 + (ix as f64 + 0.5) * h.resolution;
            let cy = h.origin.1 + (iy as f64 + 0.5) * h.resolution;
            let mut l = 1.0;
            for &(lm, r) in z {
                let d = (lm.0 - cx).hypot(lm.1 - cy);
                l *= (-0.5 * ((r - d) / std).powi(2)).exp();
            }
            post.push(h.mass[iy * h.nx + ix] * l);
        }
    }
    let t: f64 = post.iter().sum();
    post.iter().map(|v| v / t).collect()
}

// ---------- k-means ----------

/// Minimum SSE over every assignment of points to k non-empty clusters.
pub fn kmeans_exhaustive(points: &[(f64, f64)], k: usize) -> f64 {
    let n = points.len();
    let mut best = f64::INFINITY;
    let mut assign = vec![0usize; n];
    loop {
        let mut sums = vec![(0.0, 0.0, 0usize); k];
        for (p, &a) in points.iter().zip(&assign) {
            sums[a].0 += p.0;
            sums[a].1 += p.1;
            sums[a].2 += 1;
        }
        if sums.iter().all(|s| s.2 > 0) {
            let sse: f64 = points
                .iter()
                .zip(&assign)
                .map(|(p, &a)| {
                    let c = (sums[a].0 / sums[a].2 as f64, sums[a].1 / sums[a].2 as f64);
                    (p.0 - c.0).powi(2) + (p.1 - c.1).powi(2)
                })
                .sum();
            best = best.min(sse);
        }
        // next assignment in base k
        let mut i = 0;
        loop {
            if i == n {
                return best;
            }
            assign[i] += 1;
            if assign[i] < k {
                break;
            }
            assign[i] = 0;
            i += 1;
        }
    }
}

// ---------- grid search ----------

fn octile_step(a: GridCell, b: GridCell) -> f64 {
    if a.0 != b.0 && a.1 != b.1 {
        std::f64::consts::SQRT_2
    } else {
        1.0
    }
}

/// Cheapest 8-connected path cost by depth-first enumeration of simple
/// paths, pruned once a partial path is no cheaper than the best complete
/// one or than an earlier visit of the same cell.
pub fn grid_brute_force(w: &GridWorld, start: GridCell, goal: GridCell) -> Option<f64> {
    fn free(w: &GridWorld, r: i64, c: i64) -> bool {
        r >= 0
            && c >= 0
            && (r as usize) < w.height
            && (c as usize) < w.width
            && !w.blocked[r as usize * w.width + c as usize]
    }
    fn dfs(
        w: &GridWorld,
        cur: GridCell,
        goal: GridCell,
        cost: f64,
        on_path: &mut Vec<bool>,
        seen: &mut Vec<f64>,
        best: &mut f64,
    ) {
        if cost >= *best - 1e-12 {
            return;
        }
        let idx = cur.0 * w.width + cur.1;
        if cost >= seen[idx] - 1e-12 {
            return;
        }
        seen[idx] = cost;
        if cur == goal {
            *best = cost;
            return;
        }
        on_path[idx] = true;
        for dr in -1i64..=1 {
            for dc in -1i64..=1 {
                if dr == 0 && dc == 0 {
                    continue;
                }
                let (r, c) = (cur.0 as i64 + dr, cur.1 as i64 + dc);
                if !free(w, r, c) {
                    continue;
                }
                let next = (r as usize, c as usize);
                if on_path[next.0 * w.width + next.1] {
                    continue;
                }
                dfs(
                    w,
                    next,
                    goal,
                    cost + octile_step(cur, next),
                    on_path,
                    seen,
                    best,
                );
            }
        }
        on_path[idx] = false;
    }
    if w.is_blocked(start) || w.is_blocked(goal) {
        return None;
    }
    let mut best = f64::INFINITY;
    let mut on_path = vec![false; w.width * w.height];
    let mut seen = vec![f64::INFINITY; w.width * w.height];
    dfs(w, start, goal, 0.0, &mut on_path, &mut seen, &mut best);
    best.is_finite().then_some(best)
}

/// Random 8x8 world at 25% density with free corners (0,0) and (7,7).
pub fn random_world(rng: &mut RngStream) -> GridWorld {
    let mut w = GridWorld::random(8, 8, 1.0, 0.25, rng).unwrap();
    w.set_blocked((0, 0), false);
    w.set_blocked((7, 7), false);
    w
}

// ---------- QP ----------

/// Minimizes 0.5 x'Px + q'x s.t. l <= Ax <= u by trying every assignment of
/// each row to {free, at lower, at upper}, solving the equality-constrained
/// KKT system and keeping the best primal-feasible point.
pub fn qp_active_set(p: &Mat, q: &[f64], a: &Mat, l: &[f64], u: &[f64]) -> Option<Vec<f64>> {
    let (n, m) = (q.len(), l.len());
    let mut best: Option<(f64, Vec<f64>)> = None;
    for code in 0..3usize.pow(m as u32) {
        let mut rows = Vec::new();
        let mut c = code;
        let mut ok = true;
        for i in 0..m {
            match c % 3 {
                1 if l[i].is_finite() => rows.push((i, l[i])),
                2 if u[i].is_finite() => rows.push((i, u[i])),
                1 | 2 => ok = false,
                _ => {}
            }
            c /= 3;
        }
        if !ok {
            continue;
        }
        let k = rows.len();
        let mut kkt = vec![vec![0.0; n + k]; n + k];
        let mut rhs = vec![0.0; n + k];
        for i in 0..n {
            for j in 0..n {
                kkt[i][j] = p[(i, j)];
            }
            rhs[i] = -q[i];
        }
        for (r, &(i, b)) in rows.iter().enumerate() {
            for j in 0..n {
                kkt[n + r][j] = a[(i, j)];
                kkt[j][n + r] = a[(i, j)];
            }
            rhs[n + r] = b;
        }
        let Some(sol) = gauss_solve(&kkt, &rhs) else {
            continue;
        };
        let x = sol[..n].to_vec();
        let ax = a.mat_vec(&x);
        if (0..m).any(|i| ax[i] < l[i] - 1e-9 || ax[i] > u[i] + 1e-9) {
            continue;
        }
        let px = p.mat_vec(&x);
        let f: f64 = 0.5 * x.iter().zip(&px).map(|(a, b)| a * b).sum::<f64>()
            + x.iter().zip(q).map(|(a, b)| a * b).sum::<f64>();
        if best.as_ref().is_none_or(|(bf, _)| f < *bf) {
            best = Some((f, x));
        }
    }
    best.map(|(_, x)| x)
}

// ---------- finite differences ----------

/// Central-difference Jacobian of `f` at `x`.
pub fn fd_jacobian(f: impl Fn(&[f64]) -> Vec<f64>, x: &[f64], h: f64) -> Vec<Vec<f64>> {
    let m = f(x).len();
    let mut jac = vec![vec![0.0; x.len()]; m];
    for j in 0..x.len() {
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[j] += h;
        xm[j] -= h;
        let (fp, fm) = (f(&xp), f(&xm));
        for i in 0..m {
            jac[i][j] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    jac
}

/// Largest entrywise error, relative to max(1, |fd|).
pub fn jacobian_rel_error(analytic: &Mat, fd: &[Vec<f64>]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, row) in fd.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            worst = worst.max((analytic[(i, j)] - v).abs() / v.abs().max(1.0));
        }
    }
    worst
}

// ---------- LQ tracking ----------

/// First input of the finite-horizon affine LQ tracking problem
/// z[t+1] = A_t z[t] + B_t u[t] + c_t, cost sum_{t=1}^{T-1} |z_t - r_t|_Q^2 +
/// |z_T - r_T|_Qf^2 + sum_{t=0}^{T-1} |u_t|_R^2, by backward dynamic programming.
pub fn lq_tracking_first_input(
    z0: &[f64],
    models: &[(Mat, Mat, Vec<f64>)],
    reference: &[Vec<f64>],
    q: &Mat,
    qf: &Mat,
    r: &Mat,
) -> Vec<f64> {
    let t_len = models.len();
    let col = |v: &[f64]| Mat::column(v);
    // V_t(z) = z'P z + 2 p'z + const
    let mut p_mat = qf.clone();
    let mut p_vec = (&qf.scale(-1.0) * &col(&reference[t_len])).into_vec();
    let mut first = None;
    for t in (0..t_len).rev() {
        let (a, b, c) = &models[t];
        let h = r + &(&(&b.transpose() * &p_mat) * b);
        let h_inv = navsim::navcore::inverse_spd(&h).unwrap();
        let k = &(&(&h_inv * &b.transpose()) * &p_mat) * a;
        let pc_p = &(&p_mat * &col(c)) + &col(&p_vec);
        let kk = &(&h_inv * &b.transpose()) * &pc_p;
        if t == 0 {
            let u = &(&k * &col(z0)) + &kk;
            first = Some(u.into_vec().iter().map(|v| -v).collect());
            break;
        }
        let f = a - &(b * &k);
        let g = &col(c) - &(b * &kk);
        let stage_q = q;
        let new_p = &(&(&(&k.transpose() * r) * &k) + &(&(&f.transpose() * &p_mat) * &f)) + stage_q;
        let lin =
            &(&(&k.transpose() * r) * &kk) + &(&f.transpose() * &(&(&p_mat * &g) + &col(&p_vec)));
        let new_pv = &lin - &(stage_q * &col(&reference[t]));
        p_mat = new_p;
        p_vec = new_pv.into_vec();
    }
    first.expect("horizon at least 1")
}

/// The MPC prediction model over (x, y, v, yaw), written out independently.
pub fn bicycle_xyvyaw(z: &[f64], u: &[f64], l: f64, dt: f64) -> Vec<f64> {
    vec![
        z[0] + z[2] * z[3].cos() * dt,
        z[1] + z[2] * z[3].sin() * dt,
        z[2] + u[0] * dt,
        z[3] + z[2] * u[1].tan() / l * dt,
    ]
}

/// Unconstrained MPC in one outer iteration against backward DP on the same
/// affine model.
pub fn mpc_vs_riccati(z0: [f64; 4], seed: u64) -> f64 {
    let (dt, l, horizon) = (0.1, 2.5, 5);
    let mut rng = RngStream::new(seed);
    let params = MpcParams {
        horizon,
        rd: Mat::zeros(2, 2),
        a_max: 1e9,
        steer_max: 1.5,
        dsteer_max: 1e9,
        max_outer_iters: 1,
        qp: AdmmParams {
            eps: 1e-10,
            max_iter: 200_000,
            ..AdmmParams::default()
        },
        ..MpcParams::default()
    };
    let reference: Vec<[f64; 4]> = (0..=horizon)
        .map(|t| {
            [
                2.0 * dt * t as f64,
                rng.uniform_range(-0.02, 0.02),
                2.0,
                rng.uniform_range(-0.01, 0.01),
            ]
        })
        .collect();
    let out = mpc_track_step(&z0, &reference, &params, l, dt, None).unwrap();

    // zero-input rollout and its linearizations
    let mut nominal = vec![z0.to_vec()];
    for _ in 0..horizon {
        let next = bicycle_xyvyaw(nominal.last().unwrap(), &[0.0, 0.0], l, dt);
        nominal.push(next);
    }
    let models: Vec<(Mat, Mat, Vec<f64>)> = nominal[..horizon]
        .iter()
        .map(|z| linearize_bicycle(&[z[0], z[1], z[2], z[3]], 0.0, l, dt).unwrap())
        .collect();
    let refs: Vec<Vec<f64>> = reference.iter().map(|r| r.to_vec()).collect();
    let u = lq_tracking_first_input(&z0, &models, &refs, &params.q, &params.qf, &params.r);
    // the steering bound has to stay slack for the comparison to mean anything
    assert!(u[1].abs() < 0.5 * params.steer_max, "{u:?}");
    (out.accel - u[0]).abs().max((out.steer - u[1]).abs())
}
