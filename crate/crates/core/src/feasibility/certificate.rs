//! Two-step infeasibility certificates.
//!
//! For compliant `A`, `B` and a pair `(i, j)` at distance 2, `[AB]_ij` is the
//! sum of `a_iv · b_vj` over the common neighbors `v` of `i` and `j`. If `v`
//! is the only common neighbor, `AB = 11ᵀ` forces `a_iv · b_vj = 1`. Two
//! forced products sharing a factor identify the other factors, and a pair
//! with `m >= 2` common neighbors whose products are all pinned to 1 then
//! reads `[AB]_ij = m ≠ 1`.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::graph::Graph;

/// An entry of the first-applied factor `B` or the second-applied factor `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Var {
    /// `a[row, col]` of the second factor.
    A(usize, usize),
    /// `b[row, col]` of the first factor.
    B(usize, usize),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::A(r, c) => write!(f, "a[{r},{c}]"),
            Var::B(r, c) => write!(f, "b[{r},{c}]"),
        }
    }
}

/// `a[i,v] · b[v,j] = 1`, forced because `v` is the only common neighbor of `i` and `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ForcedTriple {
    pub i: usize,
    pub v: usize,
    pub j: usize,
}

impl ForcedTriple {
    pub fn a(&self) -> Var {
        Var::A(self.i, self.v)
    }

    pub fn b(&self) -> Var {
        Var::B(self.v, self.j)
    }
}

/// `left = right`, derived from two forced products sharing their other factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Equality {
    pub left: Var,
    pub right: Var,
    /// Indices into [`InfeasibilityCertificate::forced`].
    pub via: (usize, usize),
}

/// One product `a[i,v] · b[v,j]` of the contradiction, pinned to 1 by a chain
/// of forced products `F_1, …, F_p` (odd `p`): `F_1` starts at `a[i,v]`,
/// consecutive links share alternately their `b` then their `a` factor, and
/// `F_p` ends at `b[v,j]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Term {
    pub v: usize,
    pub chain: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Contradiction {
    pub i: usize,
    pub j: usize,
    pub terms: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InfeasibilityCertificate {
    pub n: usize,
    pub forced: Vec<ForcedTriple>,
    pub equalities: Vec<Equality>,
    pub contradiction: Contradiction,
}

/// Result of trying to rule out two-step schedules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TwoStepVerdict {
    /// Certified impossible.
    Certified(Box<InfeasibilityCertificate>),
    /// Diameter above 2: some entry of any product of two compliant matrices is zero.
    ImpossibleByDiameter(usize),
    /// Diameter 1: the averaging matrix itself complies.
    TriviallyFeasible,
    /// No contradiction derivable. This is not a feasibility proof.
    NoCertificate,
}

/// Union-find with the smallest variable index as representative.
struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, x: usize, y: usize) {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx != ry {
            let (lo, hi) = (rx.min(ry), rx.max(ry));
            self.parent[hi] = lo;
        }
    }
}

/// All forced products of a diameter-2 graph, ordered by `(i, j)`.
pub fn forced_triples(g: &Graph) -> Vec<ForcedTriple> {
    let n = g.n();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if g.dist(i, j) == 2 {
                if let [v] = g.common_neighbors(i, j)[..] {
                    out.push(ForcedTriple { i, v, j });
                }
            }
        }
    }
    out
}

struct Propagation {
    forced: Vec<ForcedTriple>,
    ids: BTreeMap<Var, usize>,
    /// variable id -> forced-triple indices touching it
    incident: Vec<Vec<usize>>,
    uf: UnionFind,
}

impl Propagation {
    fn new(g: &Graph) -> Self {
        let forced = forced_triples(g);
        let mut ids = BTreeMap::new();
        for f in &forced {
            ids.entry(f.a()).or_insert(0);
            ids.entry(f.b()).or_insert(0);
        }
        for (k, id) in ids.values_mut().enumerate() {
            *id = k;
        }
        let mut incident = vec![Vec::new(); ids.len()];
        let mut uf = UnionFind::new(ids.len());
        for (t, f) in forced.iter().enumerate() {
            let (a, b) = (ids[&f.a()], ids[&f.b()]);
            incident[a].push(t);
            incident[b].push(t);
            uf.union(a, b);
        }
        Self { forced, ids, incident, uf }
    }

    fn determined(&mut self, a: Var, b: Var) -> bool {
        match (self.ids.get(&a), self.ids.get(&b)) {
            (Some(&x), Some(&y)) => self.uf.find(x) == self.uf.find(y),
            _ => false,
        }
    }

    /// Shortest chain of forced products from variable `a` to variable `b`.
    fn chain(&self, a: Var, b: Var) -> Vec<usize> {
        let (src, dst) = (self.ids[&a], self.ids[&b]);
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; self.ids.len()];
        let mut seen = vec![false; self.ids.len()];
        seen[src] = true;
        let mut queue = VecDeque::from([src]);
        while let Some(x) = queue.pop_front() {
            if x == dst {
                break;
            }
            for &t in &self.incident[x] {
                let f = self.forced[t];
                let (fa, fb) = (self.ids[&f.a()], self.ids[&f.b()]);
                let y = if fa == x { fb } else { fa };
                if !seen[y] {
                    seen[y] = true;
                    prev[y] = Some((x, t));
                    queue.push_back(y);
                }
            }
        }
        let mut chain = Vec::new();
        let mut cur = dst;
        while let Some((p, t)) = prev[cur] {
            chain.push(t);
            cur = p;
        }
        chain.reverse();
        chain
    }
}

/// Distance-2 pairs with at least two common neighbors whose products are all
/// pinned to 1, in `(i, j)` order.
pub fn contradicting_pairs(g: &Graph) -> Vec<(usize, usize)> {
    if g.diameter() != 2 {
        return Vec::new();
    }
    let mut prop = Propagation::new(g);
    let n = g.n();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if g.dist(i, j) != 2 {
                continue;
            }
            let common = g.common_neighbors(i, j);
            if common.len() >= 2 && common.iter().all(|&v| prop.determined(Var::A(i, v), Var::B(v, j))) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Tries to prove that no two compliant matrices multiply to a multiple of `11ᵀ`.
///
/// Among the contradicting pairs, the one with the shortest total justification
/// is reported. Ties go to the smallest walk source `j`, then target `i`.
pub fn certify_two_step_infeasible(g: &Graph) -> TwoStepVerdict {
    match g.diameter() {
        1 => return TwoStepVerdict::TriviallyFeasible,
        d if d > 2 => return TwoStepVerdict::ImpossibleByDiameter(d),
        _ => {}
    }
    let pairs = contradicting_pairs(g);
    if pairs.is_empty() {
        return TwoStepVerdict::NoCertificate;
    }
    let prop = Propagation::new(g);
    let best = pairs
        .iter()
        .map(|&(i, j)| {
            let terms: Vec<(usize, Vec<usize>)> = g
                .common_neighbors(i, j)
                .into_iter()
                .map(|v| (v, prop.chain(Var::A(i, v), Var::B(v, j))))
                .collect();
            let cost: usize = terms.iter().map(|(_, c)| c.len()).sum();
            (cost, (i, j), terms)
        })
        .min_by_key(|&(cost, (i, j), _)| (cost, j, i))
        .unwrap();
    let (_, (i, j), terms) = best;

    // keep only the forced products used, renumbered in order of first use
    let mut used: Vec<usize> = Vec::new();
    for (_, chain) in &terms {
        for &t in chain {
            if !used.contains(&t) {
                used.push(t);
            }
        }
    }
    let renumber = |t: usize| used.iter().position(|&u| u == t).unwrap();
    let forced: Vec<ForcedTriple> = used.iter().map(|&t| prop.forced[t]).collect();
    let terms: Vec<Term> =
        terms.into_iter().map(|(v, chain)| Term { v, chain: chain.into_iter().map(renumber).collect() }).collect();

    let mut equalities = Vec::new();
    for term in &terms {
        for w in term.chain.windows(2) {
            let (x, y) = (forced[w[0]], forced[w[1]]);
            let eq = if x.b() == y.b() {
                Equality { left: x.a(), right: y.a(), via: (w[0], w[1]) }
            } else {
                Equality { left: x.b(), right: y.b(), via: (w[0], w[1]) }
            };
            if !equalities.contains(&eq) {
                equalities.push(eq);
            }
        }
    }

    TwoStepVerdict::Certified(Box::new(InfeasibilityCertificate {
        n: g.n(),
        forced,
        equalities,
        contradiction: Contradiction { i, j, terms },
    }))
}

impl fmt::Display for InfeasibilityCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.contradiction;
        writeln!(f, "two-step infeasibility certificate (n = {})", self.n)?;
        writeln!(f, "claim: no compliant A, B satisfy A*B = c*11^T for c != 0; scaling A gives c = 1")?;
        writeln!(f, "forced products (unique common neighbor v of i, j at distance 2):")?;
        for (k, t) in self.forced.iter().enumerate() {
            writeln!(f, "  F{k}: [AB][{},{}] = {}*{} = 1", t.i, t.j, t.a(), t.b())?;
        }
        writeln!(f, "equalities:")?;
        for e in &self.equalities {
            writeln!(f, "  {} = {}   (F{}, F{})", e.left, e.right, e.via.0, e.via.1)?;
        }
        let products: Vec<String> =
            c.terms.iter().map(|t| format!("{}*{}", Var::A(c.i, t.v), Var::B(t.v, c.j))).collect();
        writeln!(f, "contradiction: [AB][{},{}] = {}", c.i, c.j, products.join(" + "))?;
        for (t, p) in c.terms.iter().zip(&products) {
            let chain: Vec<String> = t.chain.iter().map(|k| format!("F{k}")).collect();
            writeln!(f, "  {p} = 1   via {}", chain.join(", "))?;
        }
        let ones = vec!["1"; c.terms.len()].join(" + ");
        write!(f, "  = {ones}\nsum = {} ≠ 1", c.terms.len())
    }
}
