use std::collections::VecDeque;

use super::tree::{PlanTree, TreeNode};
use super::world::GridWorld;
use crate::error::{NavError, Result};
use crate::navcore::RngStream;

/// A finished search: the tree and the start-to-goal waypoints.
pub type Plan = (PlanTree, Vec<(f64, f64)>);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RrtStarParams {
    /// Longest extension, in meters.
    pub step: f64,
    pub goal_sample_rate: f64,
    pub max_iter: usize,
    pub gamma: f64,
}

impl Default for RrtStarParams {
    fn default() -> Self {
        RrtStarParams {
            step: 1.0,
            goal_sample_rate: 0.1,
            max_iter: 2000,
            gamma: 30.0,
        }
    }
}

/// How states are built, compared and connected. The first two state
/// components are always the planar position.
pub trait EdgeModel {
    fn state_at(&self, pos: (f64, f64)) -> Vec<f64>;
    fn distance(&self, a: &[f64], b: &[f64]) -> f64;
    /// Multiplier applied to the near-set radius so it is in `distance` units.
    fn near_scale(&self) -> f64 {
        1.0
    }
    /// Edge cost from `a` to `b`, or `None` if the connection collides.
    fn connect(&self, world: &GridWorld, a: &[f64], b: &[f64]) -> Result<Option<f64>>;
}

/// Straight-line edges with Euclidean cost.
#[derive(Debug, Clone, Copy, Default)]
pub struct Euclidean;

impl EdgeModel for Euclidean {
    fn state_at(&self, pos: (f64, f64)) -> Vec<f64> {
        vec![pos.0, pos.1]
    }

    fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        (a[0] - b[0]).hypot(a[1] - b[1])
    }

    fn connect(&self, world: &GridWorld, a: &[f64], b: &[f64]) -> Result<Option<f64>> {
        Ok(world
            .segment_free((a[0], a[1]), (b[0], b[1]))
            .then(|| self.distance(a, b)))
    }
}

fn pos(s: &[f64]) -> (f64, f64) {
    (s[0], s[1])
}

fn pos_dist(a: &[f64], b: &[f64]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Incremental RRT* over any [`EdgeModel`]. Call [`RrtStar::step`] once per
/// iteration and [`RrtStar::finish`] to extract the best path.
pub struct RrtStar<'w, M: EdgeModel> {
    world: &'w GridWorld,
    model: M,
    params: RrtStarParams,
    goal: Vec<f64>,
    tree: PlanTree,
    children: Vec<Vec<usize>>,
    /// (node, cost of the edge from that node to the goal)
    goal_links: Vec<(usize, f64)>,
    rng: RngStream,
    iterations: usize,
}

impl<'w, M: EdgeModel> RrtStar<'w, M> {
    pub fn new(
        world: &'w GridWorld,
        model: M,
        start: (f64, f64),
        goal: (f64, f64),
        params: RrtStarParams,
        rng: RngStream,
    ) -> Result<Self> {
        if !(params.step > 0.0 && params.gamma > 0.0)
            || !(0.0..=1.0).contains(&params.goal_sample_rate)
        {
            return Err(NavError::invalid(
                "RRT* needs positive step and gamma and a goal rate in [0, 1]",
            ));
        }
        if !world.point_free(start.0, start.1) {
            return Err(NavError::invalid(format!(
                "start {start:?} is not collision-free"
            )));
        }
        let root = model.state_at(start);
        let goal = model.state_at(goal);
        Ok(RrtStar {
            world,
            model,
            params,
            goal,
            tree: PlanTree::with_root(root),
            children: vec![Vec::new()],
            goal_links: Vec::new(),
            rng,
            iterations: 0,
        })
    }

    pub fn tree(&self) -> &PlanTree {
        &self.tree
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Cheapest known root-to-goal cost so far.
    pub fn best_cost(&self) -> Option<f64> {
        self.best_link().map(|(_, c)| c)
    }

    fn best_link(&self) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for &(i, e) in &self.goal_links {
            let c = self.tree.nodes[i].cost + e;
            if best.is_none_or(|(_, b)| c < b) {
                best = Some((i, c));
            }
        }
        best
    }

    fn sample(&mut self) -> (f64, f64) {
        if self.rng.uniform() < self.params.goal_sample_rate {
            return pos(&self.goal);
        }
        let (w, h) = self.world.extent();
        (
            self.rng.uniform_range(0.0, w),
            self.rng.uniform_range(0.0, h),
        )
    }

    fn nearest(&self, s: &[f64]) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, n) in self.tree.nodes.iter().enumerate() {
            let d = self.model.distance(&n.state, s);
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        best
    }

    fn near_radius(&self) -> f64 {
        let n = (self.tree.len() + 1) as f64;
        (2.0 * self.params.step).min(self.params.gamma * (n.ln() / n).sqrt())
    }

    fn set_parent(&mut self, node: usize, parent: usize, edge_cost: f64) {
        if let Some(old) = self.tree.nodes[node].parent {
            self.children[old].retain(|&c| c != node);
        }
        self.children[parent].push(node);
        let n = &mut self.tree.nodes[node];
        n.parent = Some(parent);
        n.edge_cost = edge_cost;
        // push the new cost down the subtree
        let mut queue = VecDeque::from([node]);
        while let Some(i) = queue.pop_front() {
            let p = self.tree.nodes[i].parent.expect("non-root");
            self.tree.nodes[i].cost = self.tree.nodes[p].cost + self.tree.nodes[i].edge_cost;
            queue.extend(self.children[i].iter().copied());
        }
    }

    /// One sample-extend-rewire iteration.
    pub fn step(&mut self) -> Result<()> {
        self.iterations += 1;
        let sample = self.sample();
        let sample_state = self.model.state_at(sample);
        let nearest = self.nearest(&sample_state);
        let from = pos(&self.tree.nodes[nearest].state);
        let d = (sample.0 - from.0).hypot(sample.1 - from.1);
        if d == 0.0 {
            return Ok(());
        }
        let t = (self.params.step / d).min(1.0);
        let new_pos = (
            from.0 + t * (sample.0 - from.0),
            from.1 + t * (sample.1 - from.1),
        );
        if !self.world.point_free(new_pos.0, new_pos.1) {
            return Ok(());
        }
        let new_state = self.model.state_at(new_pos);

        let radius = self.near_radius() * self.model.near_scale();
        let mut near: Vec<usize> = (0..self.tree.len())
            .filter(|&i| self.model.distance(&self.tree.nodes[i].state, &new_state) <= radius)
            .collect();
        if !near.contains(&nearest) {
            near.push(nearest);
        }

        let mut parent = None;
        for &i in &near {
            if let Some(e) =
                self.model
                    .connect(self.world, &self.tree.nodes[i].state, &new_state)?
            {
                let c = self.tree.nodes[i].cost + e;
                if parent.is_none_or(|(_, _, best)| c < best) {
                    parent = Some((i, e, c));
                }
            }
        }
        let Some((p, e, c)) = parent else {
            return Ok(());
        };
        let new = self.tree.len();
        self.tree.nodes.push(TreeNode {
            state: new_state,
            parent: Some(p),
            cost: c,
            edge_cost: e,
        });
        self.children.push(Vec::new());
        self.children[p].push(new);

        for &j in &near {
            if j == p {
                continue;
            }
            let new_state = &self.tree.nodes[new].state;
            if let Some(e) = self
                .model
                .connect(self.world, new_state, &self.tree.nodes[j].state)?
            {
                if self.tree.nodes[new].cost + e < self.tree.nodes[j].cost {
                    self.set_parent(j, new, e);
                }
            }
        }

        let node_state = &self.tree.nodes[new].state;
        if pos_dist(node_state, &self.goal) <= self.params.step {
            if let Some(e) = self.model.connect(self.world, node_state, &self.goal)? {
                self.goal_links.push((new, e));
            }
        }
        Ok(())
    }

    /// The tree with the goal attached under its cheapest parent, plus the
    /// root-to-goal waypoints. A node already on the goal is used as is.
    pub fn finish(&self) -> Result<Plan> {
        let (parent, cost) = self.best_link().ok_or(NavError::NoPath)?;
        let mut tree = self.tree.clone();
        // a goal-biased sample can land exactly on the goal
        if pos_dist(&tree.nodes[parent].state, &self.goal) == 0.0 {
            let path = tree.waypoints(parent);
            return Ok((tree, path));
        }
        tree.nodes.push(TreeNode {
            state: self.goal.clone(),
            parent: Some(parent),
            cost,
            edge_cost: cost - self.tree.nodes[parent].cost,
        });
        let path = tree.waypoints(tree.len() - 1);
        Ok((tree, path))
    }

    /// Answers trivial queries without sampling: start equal to the goal, or
    /// the goal within one step and directly connectable.
    pub(crate) fn trivial(&self) -> Result<Option<Plan>> {
        let root = &self.tree.nodes[0].state;
        let d = pos_dist(root, &self.goal);
        if d == 0.0 {
            return Ok(Some((self.tree.clone(), vec![pos(root)])));
        }
        if d <= self.params.step {
            if let Some(e) = self.model.connect(self.world, root, &self.goal)? {
                let mut tree = self.tree.clone();
                tree.nodes.push(TreeNode {
                    state: self.goal.clone(),
                    parent: Some(0),
                    cost: e,
                    edge_cost: e,
                });
                let path = tree.waypoints(1);
                return Ok(Some((tree, path)));
            }
        }
        Ok(None)
    }

    /// Runs up to `max_iter` iterations and returns the best path.
    pub fn run(mut self) -> Result<Plan> {
        if let Some(done) = self.trivial()? {
            return Ok(done);
        }
        while self.iterations < self.params.max_iter {
            self.step()?;
        }
        self.finish()
    }
}

/// RRT* with straight-line edges.
pub fn rrt_star_plan(
    world: &GridWorld,
    start: (f64, f64),
    goal: (f64, f64),
    params: &RrtStarParams,
    rng: RngStream,
) -> Result<Plan> {
    RrtStar::new(world, Euclidean, start, goal, *params, rng)?.run()
}
