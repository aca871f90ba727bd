use crate::error::{NavError, Result};
use crate::navcore::RngStream;

/// Grid cell as (row, col). Row indexes y, col indexes x.
pub type GridCell = (usize, usize);

/// Blocked/free occupancy on a regular grid with its lower-left corner at the
/// world origin. Continuous planners treat everything outside the grid as
/// blocked.
#[derive(Debug, Clone, PartialEq)]
pub struct GridWorld {
    pub width: usize,
    pub height: usize,
    pub resolution: f64,
    /// index = row * width + col
    pub blocked: Vec<bool>,
}

impl GridWorld {
    pub fn new(width: usize, height: usize, resolution: f64) -> Result<Self> {
        if width == 0 || height == 0 || !(resolution > 0.0) {
            return Err(NavError::invalid(
                "world needs positive size and resolution",
            ));
        }
        Ok(GridWorld {
            width,
            height,
            resolution,
            blocked: vec![false; width * height],
        })
    }

    /// Builds a world from text rows, `#` blocked and anything else free.
    /// The first string is row 0.
    pub fn from_rows(rows: &[&str], resolution: f64) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.chars().count());
        let mut w = GridWorld::new(width, height, resolution)?;
        for (r, line) in rows.iter().enumerate() {
            if line.chars().count() != width {
                return Err(NavError::invalid("ragged world rows"));
            }
            for (c, ch) in line.chars().enumerate() {
                w.blocked[r * width + c] = ch == '#';
            }
        }
        Ok(w)
    }

    /// Each cell blocked independently with probability `density`.
    pub fn random(
        width: usize,
        height: usize,
        resolution: f64,
        density: f64,
        rng: &mut RngStream,
    ) -> Result<Self> {
        let mut w = GridWorld::new(width, height, resolution)?;
        for b in &mut w.blocked {
            *b = rng.uniform() < density;
        }
        Ok(w)
    }

    pub fn in_bounds(&self, c: GridCell) -> bool {
        c.0 < self.height && c.1 < self.width
    }

    /// Out-of-bounds cells count as blocked.
    pub fn is_blocked(&self, c: GridCell) -> bool {
        !self.in_bounds(c) || self.blocked[c.0 * self.width + c.1]
    }

    pub fn set_blocked(&mut self, c: GridCell, blocked: bool) {
        if self.in_bounds(c) {
            self.blocked[c.0 * self.width + c.1] = blocked;
        }
    }

    /// Blocks every cell whose center lies in the axis-aligned box.
    pub fn block_rect(&mut self, x0: f64, y0: f64, x1: f64, y1: f64) {
        for r in 0..self.height {
            for c in 0..self.width {
                let (x, y) = self.cell_center((r, c));
                if x >= x0 && x <= x1 && y >= y0 && y <= y1 {
                    self.set_blocked((r, c), true);
                }
            }
        }
    }

    /// (width, height) in meters.
    pub fn extent(&self) -> (f64, f64) {
        (
            self.width as f64 * self.resolution,
            self.height as f64 * self.resolution,
        )
    }

    pub fn cell_of(&self, x: f64, y: f64) -> Option<GridCell> {
        if !(x >= 0.0 && y >= 0.0) {
            return None;
        }
        let c = (
            (y / self.resolution).floor() as usize,
            (x / self.resolution).floor() as usize,
        );
        self.in_bounds(c).then_some(c)
    }

    pub fn cell_center(&self, c: GridCell) -> (f64, f64) {
        (
            (c.1 as f64 + 0.5) * self.resolution,
            (c.0 as f64 + 0.5) * self.resolution,
        )
    }

    pub fn point_free(&self, x: f64, y: f64) -> bool {
        self.cell_of(x, y).is_some_and(|c| !self.is_blocked(c))
    }

    /// Samples the segment every resolution/2, endpoints included.
    pub fn segment_free(&self, a: (f64, f64), b: (f64, f64)) -> bool {
        let len = (b.0 - a.0).hypot(b.1 - a.1);
        let n = (len / (0.5 * self.resolution)).ceil().max(1.0) as usize;
        (0..=n).all(|i| {
            let t = i as f64 / n as f64;
            self.point_free(a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1))
        })
    }

    /// Centers of all blocked cells, for planners that want point obstacles.
    pub fn obstacle_points(&self) -> Vec<(f64, f64)> {
        (0..self.height)
            .flat_map(|r| (0..self.width).map(move |c| (r, c)))
            .filter(|&c| self.is_blocked(c))
            .map(|c| self.cell_center(c))
            .collect()
    }
}
