//! Gather-and-distribute schedules on trees.
//!
//! Values are summed toward the tree's center, divided by `n` once, then
//! copied back out. With one center the schedule takes `2R` steps; with two
//! adjacent centers the halves gather separately and meet in a single cross
//! step, giving `2R - 1`. Either way the length is the tree's diameter, and
//! every factor entry is `0`, `1` or `1/n`.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matrix::Matrix;
use crate::schedule::{Construction, Schedule};

/// A tree rooted at its center (or at both of its two adjacent centers).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedTreePlan {
    pub tree: Graph,
    /// One center, or two adjacent centers.
    pub centers: Vec<usize>,
    /// Parent toward the node's own center; `None` for centers.
    pub parent: Vec<Option<usize>>,
    /// Distance to the node's own center.
    pub depth: Vec<usize>,
    /// Maximum depth over all nodes.
    pub height: usize,
}

impl RootedTreePlan {
    pub fn new(tree: &Graph) -> Result<Self> {
        if !tree.is_tree() {
            return Err(Error::NotTree { n: tree.n(), edges: tree.edge_count() });
        }
        let n = tree.n();
        let centers = tree.metrics().central_nodes;
        let mut parent = vec![None; n];
        let mut depth = vec![usize::MAX; n];
        let mut queue = std::collections::VecDeque::new();
        for &c in &centers {
            depth[c] = 0;
            queue.push_back(c);
        }
        // multi-source BFS; with two centers the center edge is never used as a parent link
        while let Some(u) = queue.pop_front() {
            for &w in tree.neighbors(u) {
                if depth[w] == usize::MAX {
                    depth[w] = depth[u] + 1;
                    parent[w] = Some(u);
                    queue.push_back(w);
                }
            }
        }
        let height = depth.iter().copied().max().unwrap_or(0);
        Ok(Self { tree: tree.clone(), centers, parent, depth, height })
    }

    pub fn is_bicentral(&self) -> bool {
        self.centers.len() == 2
    }

    /// Builds the factor list.
    pub fn factors(&self) -> Vec<Matrix> {
        let n = self.tree.n();
        let inv_n = 1.0 / n as f64;
        let mut factors = Vec::new();

        // gather: at step t the nodes at depth height-t absorb their children
        for level in (0..self.height).rev() {
            if !self.is_bicentral() && level == 0 {
                break;
            }
            let mut m = Matrix::identity(n);
            for v in 0..n {
                if let Some(p) = self.parent[v] {
                    if self.depth[p] == level {
                        m[(p, v)] = 1.0;
                    }
                }
            }
            factors.push(m);
        }

        if self.is_bicentral() {
            // cross step: both centers take (x_u + x_v) / n
            let mut m = Matrix::identity(n);
            let (u, v) = (self.centers[0], self.centers[1]);
            for c in [u, v] {
                m[(c, c)] = inv_n;
                m[(c, if c == u { v } else { u })] = inv_n;
            }
            factors.push(m);
        } else {
            // the center's final absorption and the division by n
            let c = self.centers[0];
            let mut absorb = Matrix::identity(n);
            for v in 0..n {
                if self.parent[v] == Some(c) {
                    absorb[(c, v)] = 1.0;
                }
            }
            factors.push(absorb);
            let mut spread = Matrix::identity(n);
            spread[(c, c)] = inv_n;
            for v in 0..n {
                if self.parent[v] == Some(c) {
                    spread[(v, v)] = 0.0;
                    spread[(v, c)] = inv_n;
                }
            }
            factors.push(spread);
        }

        // distribute: nodes at depth `level` copy their parent
        let first = if self.is_bicentral() { 1 } else { 2 };
        for level in first..=self.height {
            let mut m = Matrix::identity(n);
            for v in 0..n {
                if self.depth[v] == level {
                    let p = self.parent[v].unwrap();
                    m[(v, v)] = 0.0;
                    m[(v, p)] = 1.0;
                }
            }
            factors.push(m);
        }
        factors
    }
}

/// Gather-and-distribute schedule of exactly `D(t)` steps on a tree.
pub fn gather_distribute(t: &Graph) -> Result<Schedule> {
    let plan = RootedTreePlan::new(t)?;
    Ok(Schedule::new(t.n(), plan.factors(), Construction::Tree))
}

/// Runs [`gather_distribute`] on a BFS tree rooted at the lowest-indexed
/// central node; the result has at most `2R(g)` steps and complies with `g`.
pub fn bfs_fallback(g: &Graph) -> Schedule {
    let root = g.metrics().central_nodes[0];
    let tree = g.bfs_tree(root).expect("central node is in range");
    let mut s = gather_distribute(&tree).expect("BFS tree is a tree");
    s.construction = Construction::BfsTree;
    s
}
