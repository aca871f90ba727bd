use crate::error::{NavError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TreeNode {
    pub state: Vec<f64>,
    pub parent: Option<usize>,
    pub cost: f64,
    /// Cost of the edge from `parent`; 0 for the root.
    pub edge_cost: f64,
}

/// Search tree rooted at node 0.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PlanTree {
    pub nodes: Vec<TreeNode>,
}

impl PlanTree {
    pub fn with_root(state: Vec<f64>) -> Self {
        PlanTree {
            nodes: vec![TreeNode {
                state,
                parent: None,
                cost: 0.0,
                edge_cost: 0.0,
            }],
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Node indices from the root to `i`.
    pub fn branch(&self, i: usize) -> Vec<usize> {
        let mut out = vec![i];
        let mut cur = i;
        while let Some(p) = self.nodes[cur].parent {
            out.push(p);
            cur = p;
        }
        out.reverse();
        out
    }

    /// (x, y) of each node from the root to `i`.
    pub fn waypoints(&self, i: usize) -> Vec<(f64, f64)> {
        self.branch(i)
            .into_iter()
            .map(|j| (self.nodes[j].state[0], self.nodes[j].state[1]))
            .collect()
    }

    /// Root has no parent and zero cost; every other node's cost equals its
    /// parent's cost plus its edge cost within `tol`.
    pub fn check_costs(&self, tol: f64) -> Result<()> {
        let root = self
            .nodes
            .first()
            .ok_or_else(|| NavError::invalid("empty tree"))?;
        if root.parent.is_some() || root.cost != 0.0 {
            return Err(NavError::NumericalFailure("malformed root".into()));
        }
        for (i, n) in self.nodes.iter().enumerate().skip(1) {
            let p = n
                .parent
                .ok_or_else(|| NavError::NumericalFailure(format!("node {i} has no parent")))?;
            let expect = self.nodes[p].cost + n.edge_cost;
            if (n.cost - expect).abs() > tol || !(n.edge_cost >= 0.0) {
                return Err(NavError::NumericalFailure(format!(
                    "node {i}: cost {} but parent {p} gives {expect}",
                    n.cost
                )));
            }
        }
        Ok(())
    }
}
