//! Dijkstra and A* on a small text-map world.

use navsim::planning::{plan_grid, GridWorld};

fn main() -> navsim::Result<()> {
    let w = GridWorld::from_rows(
        &[
            "............",
            "....#.......",
            "....#..###..",
            "....#....#..",
            "....####.#..",
            ".........#..",
        ],
        1.0,
    )?;
    for (name, weight) in [("dijkstra", 0.0), ("a*", 1.0)] {
        let p = plan_grid(&w, (0, 0), (5, 11), weight)?;
        println!("{name}: {} cells, cost {:.3}", p.cells.len(), p.cost);
    }
    let p = plan_grid(&w, (0, 0), (5, 11), 1.0)?;
    for r in 0..w.height {
        let line: String = (0..w.width)
            .map(|c| match () {
                _ if w.is_blocked((r, c)) => '#',
                _ if p.cells.contains(&(r, c)) => '*',
                _ => '.',
            })
            .collect();
        println!("{line}");
    }
    Ok(())
}
