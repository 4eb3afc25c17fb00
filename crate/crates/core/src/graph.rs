//! Undirected simple graphs with a cached all-pairs hop-distance table.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// A connected, undirected, simple graph on nodes `0..n`.
///
/// Distances are computed once at construction by a breadth-first search from
/// every node, so every `Graph` value is known to be connected.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    dist: Vec<Vec<usize>>,
}

/// Eccentricity-derived metric summary of a graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Metrics {
    pub diameter: usize,
    pub radius: usize,
    pub eccentricities: Vec<usize>,
    pub central_nodes: Vec<usize>,
}

/// Intersection array `{b_0, …, b_{D-1}; c_1, …, c_D}` of a distance-regular graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntersectionArray {
    pub b: Vec<usize>,
    pub c: Vec<usize>,
}

impl IntersectionArray {
    /// Number of nodes at each distance `0..=D` from any fixed node.
    pub fn shell_sizes(&self) -> Vec<usize> {
        let mut k = vec![1usize];
        for (r, &b) in self.b.iter().enumerate() {
            let prev = k[r];
            k.push(prev * b / self.c[r]);
        }
        k
    }
}

impl fmt::Display for IntersectionArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        write!(f, "{{{};{}}}", join(&self.b), join(&self.c))
    }
}

impl Graph {
    /// Builds a graph from an edge iterator. Duplicate and reversed pairs are merged.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::SelfLoop { line: 0, node: u });
            }
            for x in [u, v] {
                if x >= n {
                    return Err(Error::OutOfRange { line: 0, index: x as i64, n });
                }
            }
            set.insert((u.min(v), u.max(v)));
        }
        Self::from_edge_set(n, set)
    }

    fn from_edge_set(n: usize, edges: BTreeSet<(usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        let mut dist = Vec::with_capacity(n);
        for s in 0..n {
            let d = bfs_distances(&adj, s);
            if let Some(node) = d.iter().position(Option::is_none) {
                return Err(Error::Disconnected { node });
            }
            dist.push(d.into_iter().map(Option::unwrap).collect());
        }
        Ok(Self { n, edges, adj, dist })
    }

    /// Parses a whitespace-separated edge list.
    ///
    /// Blank lines and lines starting with `#` are skipped. The node count is
    /// the largest index plus one unless `n` is given, in which case indices
    /// must lie below it.
    pub fn parse_edge_list(text: &str, n: Option<usize>) -> Result<Self> {
        let mut pairs = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(Error::Syntax { line, text: raw.to_string() });
            }
            let mut ends = [0usize; 2];
            for (slot, f) in ends.iter_mut().zip(&fields) {
                let value: i64 = f.parse().map_err(|_| Error::Syntax { line, text: raw.to_string() })?;
                let limit = n.unwrap_or(usize::MAX);
                if value < 0 || value as u64 >= limit as u64 || value > u32::MAX as i64 {
                    return Err(Error::OutOfRange { line, index: value, n: n.unwrap_or(0) });
                }
                *slot = value as usize;
            }
            if ends[0] == ends[1] {
                return Err(Error::SelfLoop { line, node: ends[0] });
            }
            pairs.push((ends[0], ends[1]));
        }
        if pairs.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let n = n.unwrap_or_else(|| pairs.iter().map(|&(u, v)| u.max(v)).max().unwrap() + 1);
        let set = pairs.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
        Self::from_edge_set(n, set)
    }

    /// Serializes back to the edge-list format, one `u v` line per edge with `u < v`.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        for &(u, v) in &self.edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` pairs with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    /// Sorted neighbor list of `u`.
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn dist(&self, u: usize, v: usize) -> usize {
        self.dist[u][v]
    }

    /// Common neighbors of `u` and `v`, ascending.
    pub fn common_neighbors(&self, u: usize, v: usize) -> Vec<usize> {
        let (a, b) = (&self.adj[u], &self.adj[v]);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out
    }

    pub fn eccentricity(&self, u: usize) -> usize {
        self.dist[u].iter().copied().max().unwrap_or(0)
    }

    pub fn diameter(&self) -> usize {
        (0..self.n).map(|u| self.eccentricity(u)).max().unwrap_or(0)
    }

    pub fn metrics(&self) -> Metrics {
        let eccentricities: Vec<usize> = (0..self.n).map(|u| self.eccentricity(u)).collect();
        let diameter = eccentricities.iter().copied().max().unwrap_or(0);
        let radius = eccentricities.iter().copied().min().unwrap_or(0);
        let central_nodes = (0..self.n).filter(|&u| eccentricities[u] == radius).collect();
        Metrics { diameter, radius, eccentricities, central_nodes }
    }

    /// Common degree, if every node has the same degree.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degree(0);
        self.adj.iter().all(|a| a.len() == d).then_some(d)
    }

    pub fn is_tree(&self) -> bool {
        self.edges.len() + 1 == self.n
    }

    /// True when the graph is a simple path (including the single edge).
    pub fn is_path(&self) -> bool {
        self.is_tree() && self.adj.iter().all(|a| a.len() <= 2)
    }

    /// Node order along the path, starting from the lower-indexed endpoint.
    pub fn path_order(&self) -> Option<Vec<usize>> {
        if !self.is_path() {
            return None;
        }
        let start = (0..self.n).find(|&u| self.degree(u) <= 1)?;
        let mut order = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while let Some(&next) = self.adj[cur].iter().find(|&&w| w != prev) {
            order.push(next);
            prev = cur;
            cur = next;
        }
        Some(order)
    }

    pub fn adjacency(&self) -> Matrix {
        let mut a = Matrix::zeros(self.n, self.n);
        for &(u, v) in &self.edges {
            a[(u, v)] = 1.0;
            a[(v, u)] = 1.0;
        }
        a
    }

    /// Checks distance-regularity by counting, for every ordered pair `(i, j)` at
    /// distance `r`, the neighbors of `i` at distance `r-1` and `r+1` from `j`.
    pub fn intersection_array(&self) -> Option<IntersectionArray> {
        let d = self.diameter();
        let mut b: Vec<Option<usize>> = vec![None; d + 1];
        let mut c: Vec<Option<usize>> = vec![None; d + 1];
        for i in 0..self.n {
            for j in 0..self.n {
                let r = self.dist[i][j];
                let (mut down, mut up) = (0, 0);
                for &w in &self.adj[i] {
                    let dw = self.dist[w][j];
                    if dw + 1 == r {
                        down += 1;
                    } else if dw == r + 1 {
                        up += 1;
                    }
                }
                if r < d && !record(&mut b[r], up) {
                    return None;
                }
                if r >= 1 && !record(&mut c[r], down) {
                    return None;
                }
            }
        }
        Some(IntersectionArray {
            b: b[..d].iter().map(|v| v.unwrap()).collect(),
            c: c[1..].iter().map(|v| v.unwrap()).collect(),
        })
    }

    pub fn is_distance_regular(&self) -> bool {
        self.intersection_array().is_some()
    }

    /// BFS layers from `root`: `depth[v]` and the parent of each non-root node,
    /// chosen as its lowest-indexed neighbor one layer closer to the root.
    pub fn bfs_parents(&self, root: usize) -> (Vec<usize>, Vec<Option<usize>>) {
        let depth = self.dist[root].clone();
        let parent = (0..self.n)
            .map(|v| {
                if v == root {
                    None
                } else {
                    self.adj[v].iter().copied().find(|&w| depth[w] + 1 == depth[v])
                }
            })
            .collect();
        (depth, parent)
    }

    /// Spanning tree obtained from a breadth-first search rooted at `root`.
    pub fn bfs_tree(&self, root: usize) -> Result<Graph> {
        if root >= self.n {
            return Err(Error::InvalidArgument(format!("root {root} out of range (n = {})", self.n)));
        }
        let (_, parent) = self.bfs_parents(root);
        let edges = parent.iter().enumerate().filter_map(|(v, p)| p.map(|p| (v, p)));
        Graph::new(self.n, edges)
    }
}

fn record(slot: &mut Option<usize>, value: usize) -> bool {
    match *slot {
        None => {
            *slot = Some(value);
            true
        }
        Some(v) => v == value,
    }
}

fn bfs_distances(adj: &[Vec<usize>], s: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; adj.len()];
    dist[s] = Some(0);
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for &w in &adj[u] {
            if dist[w].is_none() {
                dist[w] = Some(du + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph").field("n", &self.n).field("edges", &self.edges).finish()
    }
}
