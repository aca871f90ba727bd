//! Greedy descent on an attractive plus repulsive potential.

use navsim::planning::{plan_potential_field, PotentialParams};

fn main() -> navsim::Result<()> {
    let obstacles = [(15.0, 25.0), (5.0, 15.0), (20.0, 26.0), (25.0, 25.0)];
    let params = PotentialParams {
        rho0: 5.0,
        ..PotentialParams::default()
    };
    let path = plan_potential_field(&obstacles, (0.0, 0.0), (30.0, 30.0), &params)?;
    let clearance = path
        .iter()
        .flat_map(|p| obstacles.iter().map(move |o| (p.0 - o.0).hypot(p.1 - o.1)))
        .fold(f64::INFINITY, f64::min);
    println!(
        "{} waypoints, ends at {:?}, min clearance {clearance:.2} m",
        path.len(),
        path.last().unwrap()
    );
    Ok(())
}
