//! k-means on three Gaussian blobs.

use navsim::mapping::kmeans_cluster;
use navsim::navcore::RngStream;

fn main() -> navsim::Result<()> {
    let mut rng = RngStream::new(5);
    let centers = [(0.0, 0.0), (6.0, 1.0), (3.0, 7.0)];
    let mut pts = Vec::new();
    for c in centers {
        for _ in 0..30 {
            pts.push((rng.gaussian(c.0, 0.8)?, rng.gaussian(c.1, 0.8)?));
        }
    }
    let cl = kmeans_cluster(&pts, 3, &mut rng, 100)?;
    println!(
        "converged in {} iterations, SSE {:.3}",
        cl.iterations, cl.sse
    );
    for (i, m) in cl.centroids.iter().enumerate() {
        let n = cl.assignment.iter().filter(|&&a| a == i).count();
        println!("cluster {i}: centroid ({:.2}, {:.2}), {n} points", m.0, m.1);
    }
    Ok(())
}
