use crate::error::{NavError, Result};
use crate::navcore::RngStream;

#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    pub k: usize,
    pub centroids: Vec<(f64, f64)>,
    pub assignment: Vec<usize>,
    pub sse: f64,
    /// SSE after each Lloyd iteration.
    pub sse_history: Vec<f64>,
    pub iterations: usize,
}

fn d2(a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (a.0 - b.0, a.1 - b.1);
    dx * dx + dy * dy
}

/// Sum of squared point-to-assigned-centroid distances.
pub fn sse(points: &[(f64, f64)], centroids: &[(f64, f64)], assignment: &[usize]) -> f64 {
    points
        .iter()
        .zip(assignment)
        .map(|(p, &a)| d2(*p, centroids[a]))
        .sum()
}

fn nearest(p: (f64, f64), centroids: &[(f64, f64)]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, c) in centroids.iter().enumerate() {
        let d = d2(p, *c);
        if d < best_d {
            best = i;
            best_d = d;
        }
    }
    best
}

/// k-means++ seeding drawn from `rng`.
fn seed_centroids(points: &[(f64, f64)], k: usize, rng: &mut RngStream) -> Vec<(f64, f64)> {
    let mut centroids = vec![points[rng.below(points.len())]];
    let mut dist: Vec<f64> = points.iter().map(|p| d2(*p, centroids[0])).collect();
    while centroids.len() < k {
        let total: f64 = dist.iter().sum();
        let pick = if total > 0.0 {
            let target = rng.uniform() * total;
            let mut acc = 0.0;
            let mut chosen = points.len() - 1;
            for (i, d) in dist.iter().enumerate() {
                acc += d;
                if acc > target {
                    chosen = i;
                    break;
                }
            }
            chosen
        } else {
            // every point already coincides with a centroid
            rng.below(points.len())
        };
        let c = points[pick];
        centroids.push(c);
        for (d, p) in dist.iter_mut().zip(points) {
            *d = d.min(d2(*p, c));
        }
    }
    centroids
}

/// Lloyd's algorithm with k-means++ seeding. Stops when assignments repeat or
/// after `max_iters` iterations. An emptied cluster is moved onto the point
/// farthest from its current centroid.
pub fn kmeans_cluster(
    points: &[(f64, f64)],
    k: usize,
    rng: &mut RngStream,
    max_iters: usize,
) -> Result<Clustering> {
    if k == 0 {
        return Err(NavError::invalid("k must be at least 1"));
    }
    if k > points.len() {
        return Err(NavError::invalid(format!(
            "k = {k} exceeds the number of points ({})",
            points.len()
        )));
    }
    let mut centroids = seed_centroids(points, k, rng);
    let mut assignment: Vec<usize> = points.iter().map(|p| nearest(*p, &centroids)).collect();
    let mut history = Vec::new();
    let mut iterations = 0;

    while iterations < max_iters {
        iterations += 1;
        // update step
        let mut sums = vec![(0.0, 0.0, 0usize); k];
        for (p, &a) in points.iter().zip(&assignment) {
            sums[a].0 += p.0;
            sums[a].1 += p.1;
            sums[a].2 += 1;
        }
        for (c, s) in centroids.iter_mut().zip(&sums) {
            if s.2 > 0 {
                *c = (s.0 / s.2 as f64, s.1 / s.2 as f64);
            }
        }
        for j in 0..k {
            if sums[j].2 == 0 {
                let far = (0..points.len())
                    .max_by(|&a, &b| {
                        d2(points[a], centroids[assignment[a]])
                            .total_cmp(&d2(points[b], centroids[assignment[b]]))
                            .then(b.cmp(&a))
                    })
                    .expect("points is non-empty");
                centroids[j] = points[far];
                assignment[far] = j;
            }
        }
        // assignment step
        let next: Vec<usize> = points.iter().map(|p| nearest(*p, &centroids)).collect();
        let changed = next != assignment;
        assignment = next;
        history.push(sse(points, &centroids, &assignment));
        if !changed {
            break;
        }
    }

    let total = sse(points, &centroids, &assignment);
    Ok(Clustering {
        k,
        centroids,
        assignment,
        sse: total,
        sse_history: history,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_cluster_is_the_mean() {
        let pts = [(0.0, 0.0), (2.0, 0.0), (1.0, 3.0), (5.0, 1.0)];
        let c = kmeans_cluster(&pts, 1, &mut RngStream::new(1), 50).unwrap();
        assert!((c.centroids[0].0 - 2.0).abs() < 1e-12);
        assert!((c.centroids[0].1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_separated_pairs() {
        let pts = [(0.0, 0.0), (0.0, 1.0), (10.0, 0.0), (10.0, 1.0)];
        for seed in 0..20 {
            let c = kmeans_cluster(&pts, 2, &mut RngStream::new(seed), 50).unwrap();
            let mut cs = c.centroids.clone();
            cs.sort_by(|a, b| a.0.total_cmp(&b.0));
            assert_eq!(cs, vec![(0.0, 0.5), (10.0, 0.5)]);
            assert!((c.sse - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn invalid_k() {
        let pts = [(0.0, 0.0)];
        assert!(matches!(
            kmeans_cluster(&pts, 0, &mut RngStream::new(0), 5),
            Err(NavError::InvalidInput(_))
        ));
        assert!(matches!(
            kmeans_cluster(&pts, 2, &mut RngStream::new(0), 5),
            Err(NavError::InvalidInput(_))
        ));
    }

    #[test]
    fn duplicate_points_with_k_equal_n() {
        let pts = [(1.0, 1.0); 3];
        let c = kmeans_cluster(&pts, 3, &mut RngStream::new(4), 10).unwrap();
        assert!(c.assignment.iter().all(|&a| a < 3));
        assert_eq!(c.sse, 0.0);
    }

    proptest::proptest! {
        #[test]
        fn sse_monotone_and_consistent(
            pts in proptest::collection::vec((-50.0f64..50.0, -50.0f64..50.0), 3..40),
            k in 1usize..4,
            seed in 0u64..500,
        ) {
            let c = kmeans_cluster(&pts, k, &mut RngStream::new(seed), 100).unwrap();
            proptest::prop_assert!(c.assignment.iter().all(|&a| a < k));
            let recomputed = sse(&pts, &c.centroids, &c.assignment);
            proptest::prop_assert!((recomputed - c.sse).abs() <= 1e-9 * (1.0 + c.sse));
            for w in c.sse_history.windows(2) {
                proptest::prop_assert!(w[1] <= w[0] * (1.0 + 1e-12) + 1e-12);
            }
            proptest::prop_assert!(c.iterations <= 100);
        }
    }
}
