use crate::error::{NavError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialParams {
    pub k_att: f64,
    pub k_rep: f64,
    /// Obstacles farther than this contribute nothing.
    pub rho0: f64,
    pub resolution: f64,
}

impl Default for PotentialParams {
    fn default() -> Self {
        PotentialParams {
            k_att: 5.0,
            k_rep: 100.0,
            rho0: 2.0,
            resolution: 0.5,
        }
    }
}

const MIN_RHO: f64 = 1e-9;
const MAX_STEPS: usize = 100_000;

/// U(q) = 0.5 k_att |q - goal|^2 + sum over obstacles within rho0 of
/// 0.5 k_rep (1/rho - 1/rho0)^2.
pub fn potential(
    q: (f64, f64),
    goal: (f64, f64),
    obstacles: &[(f64, f64)],
    p: &PotentialParams,
) -> f64 {
    let d = (q.0 - goal.0).hypot(q.1 - goal.1);
    let mut u = 0.5 * p.k_att * d * d;
    for o in obstacles {
        let rho = (q.0 - o.0).hypot(q.1 - o.1).max(MIN_RHO);
        if rho <= p.rho0 {
            let t = 1.0 / rho - 1.0 / p.rho0;
            u += 0.5 * p.k_rep * t * t;
        }
    }
    u
}

/// Greedy descent over the 8-neighbourhood of a lattice anchored at `start`
/// with spacing `p.resolution`. Ends on the lattice point nearest the goal.
///
/// Fails with `LocalMinimum` when no neighbour has strictly lower potential
/// or the walk would return to one of the last three cells.
pub fn plan_potential_field(
    obstacles: &[(f64, f64)],
    start: (f64, f64),
    goal: (f64, f64),
    p: &PotentialParams,
) -> Result<Vec<(f64, f64)>> {
    if !(p.k_att > 0.0 && p.k_rep > 0.0 && p.rho0 > 0.0 && p.resolution > 0.0) {
        return Err(NavError::invalid(
            "potential field parameters must be positive",
        ));
    }
    let res = p.resolution;
    let goal_idx = (
        ((goal.0 - start.0) / res).round() as i64,
        ((goal.1 - start.1) / res).round() as i64,
    );
    let point = |i: (i64, i64)| (start.0 + i.0 as f64 * res, start.1 + i.1 as f64 * res);

    let mut cur = (0i64, 0i64);
    let mut u_cur = potential(start, goal, obstacles, p);
    let mut path = vec![start];
    let mut recent: Vec<(i64, i64)> = vec![cur];
    while cur != goal_idx {
        if path.len() > MAX_STEPS {
            let (x, y) = point(cur);
            return Err(NavError::LocalMinimum { x, y });
        }
        let mut best = None;
        let mut best_u = f64::INFINITY;
        for di in -1..=1 {
            for dj in -1..=1 {
                if di == 0 && dj == 0 {
                    continue;
                }
                let n = (cur.0 + di, cur.1 + dj);
                let u = potential(point(n), goal, obstacles, p);
                if u < best_u {
                    best_u = u;
                    best = Some(n);
                }
            }
        }
        let next = best.expect("eight neighbours");
        if best_u >= u_cur || recent.contains(&next) {
            let (x, y) = point(cur);
            return Err(NavError::LocalMinimum { x, y });
        }
        cur = next;
        u_cur = best_u;
        path.push(point(cur));
        recent.push(cur);
        if recent.len() > 3 {
            recent.remove(0);
        }
    }
    Ok(path)
}
