use std::f64::consts::PI;

use crate::error::{NavError, Result};
use crate::navcore::{wrap, Pose2D};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathPoint {
    pub x: f64,
    pub y: f64,
    pub yaw: f64,
    pub curvature: f64,
    pub target_speed: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferencePath {
    pub waypoints: Vec<PathPoint>,
}

impl ReferencePath {
    pub fn new(waypoints: Vec<PathPoint>) -> Result<Self> {
        if waypoints.len() < 2 {
            return Err(NavError::invalid(
                "a reference path needs at least two waypoints",
            ));
        }
        for (i, w) in waypoints.windows(2).enumerate() {
            if (w[1].x - w[0].x).hypot(w[1].y - w[0].y) <= 1e-6 {
                return Err(NavError::invalid(format!(
                    "waypoints {i} and {} coincide",
                    i + 1
                )));
            }
        }
        Ok(ReferencePath { waypoints })
    }

    pub fn len(&self) -> usize {
        self.waypoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.waypoints.is_empty()
    }

    /// Straight line from `start` along `yaw`, `n` points `ds` apart.
    pub fn straight(start: (f64, f64), yaw: f64, ds: f64, n: usize, speed: f64) -> Result<Self> {
        let (s, c) = yaw.sin_cos();
        ReferencePath::new(
            (0..n)
                .map(|i| PathPoint {
                    x: start.0 + i as f64 * ds * c,
                    y: start.1 + i as f64 * ds * s,
                    yaw,
                    curvature: 0.0,
                    target_speed: speed,
                })
                .collect(),
        )
    }

    /// Integrates a curvature profile kappa(s) from the origin heading +x,
    /// sampling every `ds` meters up to `length`.
    pub fn from_curvature(
        kappa: impl Fn(f64) -> f64,
        length: f64,
        ds: f64,
        speed: f64,
    ) -> Result<Self> {
        if !(ds > 0.0 && length > ds) {
            return Err(NavError::invalid("need 0 < ds < length"));
        }
        let n = (length / ds).floor() as usize + 1;
        let mut pts = Vec::with_capacity(n);
        let (mut x, mut y, mut yaw) = (0.0, 0.0, 0.0);
        for i in 0..n {
            let s = i as f64 * ds;
            pts.push(PathPoint {
                x,
                y,
                yaw: wrap(yaw),
                curvature: kappa(s),
                target_speed: speed,
            });
            // midpoint heading over [s, s + ds]
            let k0 = kappa(s);
            let km = kappa(s + 0.5 * ds);
            let k1 = kappa(s + ds);
            let yaw_mid = yaw + 0.5 * ds * 0.5 * (k0 + km);
            x += ds * yaw_mid.cos();
            y += ds * yaw_mid.sin();
            yaw += ds * (k0 + 4.0 * km + k1) / 6.0;
        }
        ReferencePath::new(pts)
    }

    /// The wavy test course: kappa(s) = 0.1 sin(2 pi s / 30) for the first
    /// 60 m, straight afterwards.
    pub fn canonical(speed: f64, length: f64) -> Result<Self> {
        let kappa = |s: f64| {
            if s < 60.0 {
                0.1 * (2.0 * PI * s / 30.0).sin()
            } else {
                0.0
            }
        };
        ReferencePath::from_curvature(kappa, length, 0.1, speed)
    }
}

/// Closest waypoint, signed cross-track error (positive when the pose is left
/// of the path tangent) and wrapped heading error.
pub fn nearest_path_point(pose: &Pose2D, path: &ReferencePath) -> (usize, f64, f64) {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, w) in path.waypoints.iter().enumerate() {
        let d = (pose.x - w.x).powi(2) + (pose.y - w.y).powi(2);
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    let w = &path.waypoints[best];
    let (s, c) = w.yaw.sin_cos();
    let e = -(pose.x - w.x) * s + (pose.y - w.y) * c;
    (best, e, wrap(pose.yaw - w.yaw))
}

/// T + 1 reference states (x, y, v, yaw) starting at waypoint `start`, spaced
/// by target_speed * dt of arc length. Yaws are unwrapped to stay within pi
/// of `yaw_now` and of each other. Points past the end repeat the last one.
pub fn reference_window(
    path: &ReferencePath,
    start: usize,
    horizon: usize,
    dt: f64,
    yaw_now: f64,
) -> Vec<[f64; 4]> {
    let ds = if path.len() > 1 {
        (path.waypoints[1].x - path.waypoints[0].x).hypot(path.waypoints[1].y - path.waypoints[0].y)
    } else {
        1.0
    };
    let mut out = Vec::with_capacity(horizon + 1);
    let mut travelled = 0.0;
    let mut prev_yaw = yaw_now;
    for _ in 0..=horizon {
        let idx = (start + (travelled / ds).round() as usize).min(path.len() - 1);
        let w = &path.waypoints[idx];
        let yaw = prev_yaw + wrap(w.yaw - prev_yaw);
        out.push([w.x, w.y, w.target_speed, yaw]);
        prev_yaw = yaw;
        travelled += w.target_speed.abs() * dt;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_convention() {
        let p = ReferencePath::straight((0.0, 0.0), 0.0, 0.5, 20, 1.0).unwrap();
        let (i, e, th) = nearest_path_point(&Pose2D::new(3.0, 1.0, 0.0), &p);
        assert_eq!((i, e, th), (6, 1.0, 0.0));
        let (i, e, th) = nearest_path_point(&Pose2D::new(2.0, 0.0, 0.0), &p);
        assert_eq!((i, e, th), (4, 0.0, 0.0));
        let (_, e, _) = nearest_path_point(&Pose2D::new(3.0, -0.3, 0.0), &p);
        assert!((e + 0.3).abs() < 1e-15);
    }

    #[test]
    fn canonical_shape() {
        let p = ReferencePath::canonical(2.0, 140.0).unwrap();
        assert_eq!(p.len(), 1401);
        // net heading change over the curved section is zero
        let w = &p.waypoints[600];
        assert!(w.yaw.abs() < 1e-9, "{}", w.yaw);
        assert_eq!(p.waypoints[700].curvature, 0.0);
        let max_yaw = p.waypoints.iter().map(|w| w.yaw.abs()).fold(0.0, f64::max);
        assert!((max_yaw - 3.0 / PI).abs() < 1e-3);
    }

    #[test]
    fn window_unwraps_yaw() {
        let p = ReferencePath::straight((0.0, 0.0), PI, 0.1, 50, 1.0).unwrap();
        let w = reference_window(&p, 0, 5, 0.1, -3.1);
        assert_eq!(w.len(), 6);
        assert!((w[0][3] + PI).abs() < 1e-12);
        assert!(((w[1][0] - w[0][0]).abs() - 0.1).abs() < 1e-12);
        let tail = reference_window(&p, 48, 5, 0.1, PI);
        assert_eq!(tail[5][0], p.waypoints[49].x);
    }

    #[test]
    fn rejects_duplicate_points() {
        let w = PathPoint {
            x: 0.0,
            y: 0.0,
            yaw: 0.0,
            curvature: 0.0,
            target_speed: 1.0,
        };
        assert!(ReferencePath::new(vec![w, w]).is_err());
        assert!(ReferencePath::new(vec![w]).is_err());
    }
}
