//! LQR-RRT* for a planar double integrator; edges are LQR closed-loop rollouts.

use navsim::navcore::RngStream;
use navsim::planning::{lqr_rrt_star_plan, lqr_steer, GridWorld, RrtStarParams};

fn main() -> navsim::Result<()> {
    let (traj, cost) = lqr_steer(&[0.0, 0.0, 0.0, 0.0], &[1.0, 0.0, 0.0, 0.0], 100, 0.1)?;
    let end = traj.last().unwrap();
    println!(
        "steer 1 m: {} steps, cost {cost:.3}, end ({:.4}, {:.4})",
        traj.len(),
        end[0],
        end[1]
    );

    let mut w = GridWorld::new(30, 30, 0.5)?;
    w.block_rect(4.0, 0.0, 6.0, 10.0);
    w.block_rect(9.0, 5.0, 11.0, 15.0);
    let params = RrtStarParams {
        max_iter: 1000,
        ..RrtStarParams::default()
    };
    let (tree, path) = lqr_rrt_star_plan(&w, (1.0, 1.0), (13.0, 13.0), &params, RngStream::new(1))?;
    println!("tree {} nodes, path {} waypoints", tree.len(), path.len());
    Ok(())
}
