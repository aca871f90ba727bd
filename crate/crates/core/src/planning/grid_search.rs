use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::SQRT_2;

use super::world::{GridCell, GridWorld};
use crate::error::{NavError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct GridPath {
    pub cells: Vec<GridCell>,
    pub cost: f64,
}

impl GridPath {
    /// Sum of unit / sqrt(2) step costs along `cells`.
    pub fn recompute_cost(&self) -> f64 {
        self.cells.windows(2).map(|w| step_cost(w[0], w[1])).sum()
    }
}

/// Moves in the order they are expanded.
pub const MOVES: [(i64, i64); 8] = [
    (-1, -1),
    (-1, 0),
    (-1, 1),
    (0, -1),
    (0, 1),
    (1, -1),
    (1, 0),
    (1, 1),
];

pub(crate) fn step_cost(a: GridCell, b: GridCell) -> f64 {
    if a.0 != b.0 && a.1 != b.1 {
        SQRT_2
    } else {
        1.0
    }
}

/// Free 8-neighbours of `c`. Diagonals need only the destination to be free.
pub fn neighbors(w: &GridWorld, c: GridCell) -> impl Iterator<Item = GridCell> + '_ {
    MOVES.iter().filter_map(move |&(dr, dc)| {
        let r = c.0 as i64 + dr;
        let col = c.1 as i64 + dc;
        if r < 0 || col < 0 {
            return None;
        }
        let n = (r as usize, col as usize);
        (!w.is_blocked(n)).then_some(n)
    })
}

#[derive(PartialEq)]
struct Entry {
    f: f64,
    g: f64,
    cell: GridCell,
}

impl Eq for Entry {}

impl Ord for Entry {
    // reversed: BinaryHeap is a max-heap and we pop the smallest (f, row, col)
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .total_cmp(&self.f)
            .then_with(|| other.cell.cmp(&self.cell))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Best-first search on the 8-connected grid. `heuristic_weight` scales the
/// Euclidean heuristic: 0 is Dijkstra, 1 is A*.
pub fn plan_grid(
    w: &GridWorld,
    start: GridCell,
    goal: GridCell,
    heuristic_weight: f64,
) -> Result<GridPath> {
    if !(heuristic_weight >= 0.0) {
        return Err(NavError::invalid("heuristic weight must be non-negative"));
    }
    for (name, c) in [("start", start), ("goal", goal)] {
        if w.is_blocked(c) {
            return Err(NavError::invalid(format!(
                "{name} cell {c:?} is blocked or outside the world"
            )));
        }
    }
    let h = |c: GridCell| {
        let dr = c.0 as f64 - goal.0 as f64;
        let dc = c.1 as f64 - goal.1 as f64;
        heuristic_weight * dr.hypot(dc)
    };
    let idx = |c: GridCell| c.0 * w.width + c.1;
    let mut g = vec![f64::INFINITY; w.blocked.len()];
    let mut parent: Vec<Option<GridCell>> = vec![None; w.blocked.len()];
    let mut closed = vec![false; w.blocked.len()];
    let mut open = BinaryHeap::new();
    g[idx(start)] = 0.0;
    open.push(Entry {
        f: h(start),
        g: 0.0,
        cell: start,
    });

    while let Some(Entry { g: gc, cell, .. }) = open.pop() {
        if closed[idx(cell)] || gc > g[idx(cell)] {
            continue;
        }
        closed[idx(cell)] = true;
        if cell == goal {
            let mut cells = vec![goal];
            let mut cur = goal;
            while let Some(p) = parent[idx(cur)] {
                cells.push(p);
                cur = p;
            }
            cells.reverse();
            return Ok(GridPath { cells, cost: gc });
        }
        for n in neighbors(w, cell) {
            if closed[idx(n)] {
                continue;
            }
            let cand = gc + step_cost(cell, n);
            if cand < g[idx(n)] {
                g[idx(n)] = cand;
                parent[idx(n)] = Some(cell);
                open.push(Entry {
                    f: cand + h(n),
                    g: cand,
                    cell: n,
                });
            }
        }
    }
    Err(NavError::NoPath)
}
