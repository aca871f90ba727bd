use std::collections::BTreeMap;
use std::fmt;

use super::config::ScenarioConfig;
use super::svg::Series;
use super::trace::TraceTable;
use crate::error::NavError;
use crate::mapping::OccupancyGrid;

mod localization;
mod mapping;
mod planning;
mod slam;
mod tracking;

pub use slam::slam_world;

/// Every registered demo, in display order.
pub const DEMOS: [&str; 14] = [
    "ekf_localization",
    "particle_localization",
    "histogram_localization",
    "grid_mapping",
    "kmeans_clustering",
    "ekf_slam",
    "fastslam2",
    "dijkstra_grid",
    "astar_grid",
    "potential_field",
    "rrt_star",
    "lqr_rrt_star",
    "rear_wheel_pid",
    "mpc_tracking",
];

pub fn list_demos() -> &'static [&'static str] {
    &DEMOS
}

/// Final landmark estimates: (id, true x, true y, estimated x, estimated y, error).
#[derive(Debug, Clone, PartialEq)]
pub struct LandmarkTable {
    pub rows: Vec<[f64; 6]>,
}

impl LandmarkTable {
    pub const COLUMNS: [&'static str; 6] = ["id", "true_x", "true_y", "est_x", "est_y", "error"];
}

#[derive(Debug, Clone, PartialEq)]
pub struct DemoOutput {
    pub trace: TraceTable,
    pub series: Vec<Series>,
    pub grid: Option<OccupancyGrid>,
    pub landmarks: Option<LandmarkTable>,
}

/// A failed run, carrying whatever trace was recorded before the failure.
#[derive(Debug)]
pub struct DemoError {
    pub error: NavError,
    pub partial: Option<TraceTable>,
}

impl fmt::Display for DemoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.partial {
            Some(t) => write!(f, "{} (after {} trace rows)", self.error, t.len()),
            None => write!(f, "{}", self.error),
        }
    }
}

impl std::error::Error for DemoError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.error)
    }
}

impl From<NavError> for DemoError {
    fn from(error: NavError) -> Self {
        DemoError {
            error,
            partial: None,
        }
    }
}

pub(crate) type DemoResult = std::result::Result<DemoOutput, DemoError>;

/// Attaches the trace so far to an algorithm failure.
pub(crate) trait AtTrace<T> {
    fn at(self, trace: &TraceTable) -> std::result::Result<T, DemoError>;
}

impl<T> AtTrace<T> for crate::Result<T> {
    fn at(self, trace: &TraceTable) -> std::result::Result<T, DemoError> {
        self.map_err(|error| DemoError {
            error,
            partial: Some(trace.clone()),
        })
    }
}

/// Resolves `cfg.params` against the demo's known keys and defaults.
pub(crate) fn resolve_params(
    cfg: &ScenarioConfig,
    known: &[(&'static str, f64)],
) -> crate::Result<BTreeMap<&'static str, f64>> {
    let mut out: BTreeMap<&'static str, f64> = known.iter().copied().collect();
    for (k, v) in &cfg.params {
        match known.iter().find(|(name, _)| name == k) {
            Some((name, _)) => {
                out.insert(name, *v);
            }
            None => {
                let names: Vec<&str> = known.iter().map(|(n, _)| *n).collect();
                return Err(NavError::invalid(format!(
                    "unknown param `{k}` for {}; known: {}",
                    cfg.demo,
                    names.join(", ")
                )));
            }
        }
    }
    Ok(out)
}

/// Parameter names and defaults for a demo.
pub fn demo_params(demo: &str) -> Option<&'static [(&'static str, f64)]> {
    Some(match demo {
        "ekf_localization" => localization::EKF_PARAMS,
        "particle_localization" => localization::PF_PARAMS,
        "histogram_localization" => localization::HIST_PARAMS,
        "grid_mapping" => mapping::GRID_PARAMS,
        "kmeans_clustering" => mapping::KMEANS_PARAMS,
        "ekf_slam" => slam::EKF_SLAM_PARAMS,
        "fastslam2" => slam::FASTSLAM_PARAMS,
        "dijkstra_grid" => planning::DIJKSTRA_PARAMS,
        "astar_grid" => planning::ASTAR_PARAMS,
        "potential_field" => planning::POTENTIAL_PARAMS,
        "rrt_star" => planning::RRT_PARAMS,
        "lqr_rrt_star" => planning::LQR_RRT_PARAMS,
        "rear_wheel_pid" => tracking::REAR_WHEEL_PARAMS,
        "mpc_tracking" => tracking::MPC_PARAMS,
        _ => return None,
    })
}

/// Runs one scenario. Same config, same bytes out.
pub fn run_demo(cfg: &ScenarioConfig) -> DemoResult {
    let known = demo_params(&cfg.demo).ok_or_else(|| NavError::UnknownDemo(cfg.demo.clone()))?;
    cfg.validate()?;
    let p = resolve_params(cfg, known)?;
    match cfg.demo.as_str() {
        "ekf_localization" => localization::ekf(cfg, &p),
        "particle_localization" => localization::particle(cfg, &p),
        "histogram_localization" => localization::histogram(cfg, &p),
        "grid_mapping" => mapping::grid(cfg, &p),
        "kmeans_clustering" => mapping::kmeans(cfg, &p),
        "ekf_slam" => slam::ekf(cfg, &p),
        "fastslam2" => slam::fastslam(cfg, &p),
        "dijkstra_grid" => planning::grid(cfg, &p, 0.0),
        "astar_grid" => planning::grid(cfg, &p, p["heuristic_weight"]),
        "potential_field" => planning::potential(cfg, &p),
        "rrt_star" => planning::rrt(cfg, &p),
        "lqr_rrt_star" => planning::lqr_rrt(cfg, &p),
        "rear_wheel_pid" => tracking::rear_wheel(cfg, &p),
        "mpc_tracking" => tracking::mpc(cfg, &p),
        other => Err(NavError::UnknownDemo(other.to_string()).into()),
    }
}

pub(crate) fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).hypot(a.1 - b.1)
}

/// Closed outline of an axis-aligned box, for plotting.
pub(crate) fn box_outline(x0: f64, y0: f64, x1: f64, y1: f64) -> Vec<(f64, f64)> {
    vec![(x0, y0), (x1, y0), (x1, y1), (x0, y1), (x0, y0)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_consistent() {
        assert_eq!(list_demos().len(), 14);
        for d in list_demos() {
            assert!(demo_params(d).is_some(), "{d}");
        }
    }

    #[test]
    fn unknown_demo_and_param() {
        let r = run_demo(&ScenarioConfig::new("nonexistent", 1));
        assert!(matches!(
            r,
            Err(DemoError {
                error: NavError::UnknownDemo(_),
                ..
            })
        ));
        let cfg = ScenarioConfig::new("ekf_localization", 1).with_param("bogus", 1.0);
        assert!(matches!(
            run_demo(&cfg),
            Err(DemoError {
                error: NavError::InvalidInput(_),
                ..
            })
        ));
    }
}
