//! Path planning on a grid world: Dijkstra and A*, greedy potential-field
//! descent, RRT* and LQR-RRT*.

pub mod grid_search;
pub mod lqr_rrt_star;
pub mod potential;
pub mod rrt_star;
pub mod tree;
pub mod world;

pub use grid_search::{plan_grid, GridPath};
pub use lqr_rrt_star::{lqr_rrt_star_plan, lqr_rrt_star_planner, lqr_steer, LqrSteer};
pub use potential::{plan_potential_field, potential, PotentialParams};
pub use rrt_star::{rrt_star_plan, EdgeModel, Euclidean, Plan, RrtStar, RrtStarParams};
pub use tree::{PlanTree, TreeNode};
pub use world::{GridCell, GridWorld};
