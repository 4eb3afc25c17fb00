//! Named graphs and random generators used by tests, the CLI and the demo.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::Graph;

fn build(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Graph {
    Graph::new(n, edges).expect("family constructors produce connected simple graphs")
}

/// Path `0 - 1 - … - (n-1)`. Requires `n >= 2`.
pub fn path(n: usize) -> Graph {
    assert!(n >= 2);
    build(n, (1..n).map(|i| (i - 1, i)))
}

/// Cycle on `n >= 3` nodes.
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3);
    build(n, (0..n).map(|i| (i, (i + 1) % n)))
}

pub fn complete(n: usize) -> Graph {
    assert!(n >= 2);
    build(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
}

/// `K_{p,q}` with parts `0..p` and `p..p+q`.
pub fn complete_bipartite(p: usize, q: usize) -> Graph {
    build(p + q, (0..p).flat_map(|i| (p..p + q).map(move |j| (i, j))))
}

/// Star `K_{1,leaves}` centred at node 0.
pub fn star(leaves: usize) -> Graph {
    build(leaves + 1, (1..=leaves).map(|i| (0, i)))
}

/// `d`-dimensional hypercube.
pub fn hypercube(d: u32) -> Graph {
    let n = 1usize << d;
    build(n, (0..n).flat_map(|u| (0..d).map(move |b| (u, u ^ (1 << b)))))
}

/// Cubic graph from LCF notation: a Hamiltonian cycle plus the chord
/// `i -> i + jumps[i mod len]` at each node.
pub fn lcf(jumps: &[i64], repeats: usize) -> Graph {
    let n = jumps.len() * repeats;
    let ni = n as i64;
    let chords = (0..n).map(|i| (i, (i as i64 + jumps[i % jumps.len()]).rem_euclid(ni) as usize));
    build(n, (0..n).map(|i| (i, (i + 1) % n)).chain(chords))
}

/// Pappus graph, `[5,7,-7,7,-7,-5]^3`.
pub fn pappus() -> Graph {
    lcf(&[5, 7, -7, 7, -7, -5], 3)
}

/// Petersen graph: outer 5-cycle `0..5`, inner pentagram `5..10`, spokes `i - i+5`.
pub fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    build(10, outer.chain(inner).chain(spokes))
}

/// Edges of a 10-node diameter-2 graph on which no two compliant matrices
/// multiply to the averaging matrix.
///
/// Obtained by exhaustive search over graphs with maximum degree 4 that
/// contain the edges `0-3, 3-5, 3-6, 2-4, 4-6, 4-7, 1-3, 1-4` and in which
/// the distance-2 pairs `(0,5), (0,6), (1,5)` have the single common neighbor
/// 3, `(2,6), (2,7), (1,7)` have the single common neighbor 4, and `(1,6)`
/// has exactly the common neighbors 3 and 4. Among those, it is the graph
/// whose Laplacian has four distinct eigenvalues.
pub const COUNTEREXAMPLE_EDGES: [(usize, usize); 17] = [
    (0, 1),
    (0, 3),
    (0, 9),
    (1, 2),
    (1, 3),
    (1, 4),
    (2, 4),
    (2, 8),
    (3, 5),
    (3, 6),
    (4, 6),
    (4, 7),
    (5, 6),
    (5, 8),
    (6, 7),
    (7, 9),
    (8, 9),
];

/// The counterexample graph built from [`COUNTEREXAMPLE_EDGES`].
pub fn counterexample() -> Graph {
    build(10, COUNTEREXAMPLE_EDGES)
}

/// Looks up a named graph: `pappus`, `petersen`, `counterexample`,
/// `path:N`, `cycle:N`, `complete:N`, `star:N`, `bipartite:P:Q`, `cube:D`.
pub fn by_name(spec: &str) -> Option<Graph> {
    let parts: Vec<&str> = spec.split(':').collect();
    let arg = |i: usize| parts.get(i).and_then(|s| s.parse::<usize>().ok());
    match parts[0] {
        "pappus" => Some(pappus()),
        "petersen" => Some(petersen()),
        "counterexample" | "gcx" => Some(counterexample()),
        "path" => arg(1).filter(|&n| n >= 2).map(path),
        "cycle" => arg(1).filter(|&n| n >= 3).map(cycle),
        "complete" => arg(1).filter(|&n| n >= 2).map(complete),
        "star" => arg(1).filter(|&n| n >= 1).map(star),
        "bipartite" => Some(complete_bipartite(arg(1).filter(|&p| p >= 1)?, arg(2).filter(|&q| q >= 1)?)),
        "cube" => arg(1).filter(|&d| (1..=10).contains(&d)).map(|d| hypercube(d as u32)),
        _ => None,
    }
}

/// Uniformly random labelled tree on `n >= 2` nodes (Prüfer decoding).
pub fn random_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Graph {
    assert!(n >= 2);
    if n == 2 {
        return path(2);
    }
    let code: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &c in &code {
        degree[c] += 1;
    }
    let mut leaves: std::collections::BTreeSet<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &c in &code {
        let leaf = *leaves.iter().next().unwrap();
        leaves.remove(&leaf);
        edges.push((leaf, c));
        degree[c] -= 1;
        if degree[c] == 1 {
            leaves.insert(c);
        }
    }
    let rest: Vec<usize> = leaves.into_iter().collect();
    edges.push((rest[0], rest[1]));
    build(n, edges)
}

/// Random connected graph: a random spanning tree plus each remaining pair
/// independently with probability `p`, under a random relabelling.
pub fn random_connected<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let tree = random_tree(n, rng);
    let mut label: Vec<usize> = (0..n).collect();
    label.shuffle(rng);
    let mut edges: Vec<(usize, usize)> = tree.edges().collect();
    for i in 0..n {
        for j in i + 1..n {
            if !tree.has_edge(i, j) && rng.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    build(n, edges.into_iter().map(|(u, v)| (label[u], label[v])))
}
