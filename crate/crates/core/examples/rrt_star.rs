//! RRT* around two bars, stepping the planner and watching the best cost.

use navsim::navcore::RngStream;
use navsim::planning::{Euclidean, GridWorld, RrtStar, RrtStarParams};

fn main() -> navsim::Result<()> {
    let mut w = GridWorld::new(30, 30, 0.5)?;
    w.block_rect(4.0, 0.0, 6.0, 10.0);
    w.block_rect(9.0, 5.0, 11.0, 15.0);
    let params = RrtStarParams::default();
    let mut planner = RrtStar::new(
        &w,
        Euclidean,
        (1.0, 1.0),
        (13.0, 13.0),
        params,
        RngStream::new(42),
    )?;
    while planner.iterations() < params.max_iter {
        planner.step()?;
        if planner.iterations() % 500 == 0 {
            println!(
                "iter {:4}  nodes {:4}  best cost {:?}",
                planner.iterations(),
                planner.tree().len(),
                planner.best_cost()
            );
        }
    }
    let (tree, path) = planner.finish()?;
    tree.check_costs(1e-9)?;
    println!("path with {} waypoints: {path:?}", path.len());
    Ok(())
}
