//! Occupancy-grid mapping by ray casting range scans into a log-odds lattice,
//! and k-means clustering of 2D point sets.

pub mod grid;
pub mod kmeans;

pub use grid::{bresenham_ray, grid_update_scan, l_free, l_occ, logistic, Cell, OccupancyGrid};
pub use kmeans::{kmeans_cluster, sse, Clustering};
