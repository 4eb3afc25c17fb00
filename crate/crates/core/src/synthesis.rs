//! Spectral schedule synthesis.
//!
//! A symmetric, nonnegative, irreducible compliant matrix `M` with `M·1 = k·1`
//! and distinct eigenvalues `k, λ_1, …, λ_{s-1}` yields the schedule
//! `A^(t) = (M - λ_t I) / (k - λ_t)`: every factor complies with the graph,
//! the factors commute, and their product is `(1/n)·11ᵀ`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matrix::Matrix;
use crate::schedule::{Construction, Schedule, SpectralMeta};
use crate::spectra::{self, compliance_violation, is_irreducible, DEFAULT_CLUSTER_TOL};
use crate::tree;

/// Default bound on the max-entry residual of a schedule product.
pub const DEFAULT_VERIFY_TOL: f64 = 1e-9;
/// Relative residual accepted for `M·1 = k·1`.
pub const ROW_SUM_TOL: f64 = 1e-10;

/// Adjacency matrix of a regular graph; its common degree is the `k` of `A·1 = k·1`.
pub fn candidate_adjacency(g: &Graph) -> Result<Matrix> {
    let degrees = g.degrees();
    let (min, max) = (*degrees.iter().min().unwrap(), *degrees.iter().max().unwrap());
    if min != max {
        return Err(Error::NotRegular { min, max });
    }
    Ok(g.adjacency())
}

/// `A - diag(A·1) + max(A·1)·I`: symmetric, nonnegative, irreducible, with row sums `max degree`.
pub fn candidate_laplacian_shift(g: &Graph) -> Matrix {
    let degrees: Vec<f64> = g.degrees().into_iter().map(|d| d as f64).collect();
    let max = degrees.iter().copied().fold(0.0, f64::max);
    let shift: Vec<f64> = degrees.iter().map(|d| max - d).collect();
    g.adjacency().add(&Matrix::diag(&shift))
}

/// `A_{P_n} + diag(1, 0, …, 0, 1)` on the path `0 - 1 - … - (n-1)`.
pub fn candidate_path(n: usize) -> Result<Matrix> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("path candidate needs n >= 2, got {n}")));
    }
    let mut m = Matrix::zeros(n, n);
    for i in 1..n {
        m[(i - 1, i)] = 1.0;
        m[(i, i - 1)] = 1.0;
    }
    m[(0, 0)] += 1.0;
    m[(n - 1, n - 1)] += 1.0;
    Ok(m)
}

/// The path candidate laid out along `g`'s node order. Fails unless `g` is a path.
pub fn candidate_path_for(g: &Graph) -> Result<Matrix> {
    let order = g.path_order().ok_or(Error::NotPath)?;
    let base = candidate_path(g.n())?;
    let mut m = Matrix::zeros(g.n(), g.n());
    for (a, &u) in order.iter().enumerate() {
        for (b, &v) in order.iter().enumerate() {
            m[(u, v)] = base[(a, b)];
        }
    }
    Ok(m)
}

/// Flags behind the spectral sufficient conditions for one candidate matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionReport {
    /// `M·1 = k·1` holds to [`ROW_SUM_TOL`].
    pub has_one_eigvec: bool,
    /// Mean row sum.
    pub k: f64,
    /// The eigenvalue `k` is simple.
    pub mult_one: bool,
    /// Number of distinct eigenvalues (symmetric matrices only).
    pub s: Option<usize>,
    /// `D + 1`, the value of `s` giving a diameter-length schedule.
    pub needed: usize,
    pub symmetric: bool,
    pub nonnegative: bool,
    pub irreducible: bool,
    /// Distinct eigenvalues, ascending (symmetric matrices only).
    pub distinct: Vec<f64>,
}

impl ConditionReport {
    /// All structural conditions hold, so a schedule of `s - 1` steps exists.
    pub fn admits_schedule(&self) -> bool {
        self.has_one_eigvec && self.mult_one && self.symmetric && self.nonnegative && self.irreducible
    }

    /// Additionally `s = D + 1`: the schedule has diameter length.
    pub fn diameter_length(&self) -> bool {
        self.admits_schedule() && self.s == Some(self.needed)
    }

    fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.symmetric {
            out.push("not symmetric");
        }
        if !self.nonnegative {
            out.push("has negative entries");
        }
        if !self.irreducible {
            out.push("not irreducible");
        }
        if !self.has_one_eigvec {
            out.push("row sums differ");
        }
        if self.has_one_eigvec && self.symmetric && !self.mult_one {
            out.push("eigenvalue k is not simple");
        }
        out
    }
}

pub fn check_conditions(m: &Matrix, g: &Graph) -> Result<ConditionReport> {
    check_conditions_with_tol(m, g, DEFAULT_CLUSTER_TOL)
}

pub fn check_conditions_with_tol(m: &Matrix, g: &Graph, cluster_tol: f64) -> Result<ConditionReport> {
    if let Some((i, j)) = compliance_violation(m, g)? {
        return Err(Error::NonCompliant { i, j });
    }
    let n = g.n();
    let sums = m.row_sums();
    let k = sums.iter().sum::<f64>() / n as f64;
    let spread = sums.iter().fold(0.0f64, |acc, s| acc.max((s - k).abs()));
    let has_one_eigvec = spread <= ROW_SUM_TOL * m.frobenius().max(1.0);
    let symmetric = m.is_symmetric(spectra::SYMMETRY_TOL);
    let nonnegative = m.as_slice().iter().all(|&v| v >= 0.0);
    let irreducible = is_irreducible(m);

    let (s, distinct, mult_one) = if symmetric {
        let spec = spectra::sym_eig_with_tol(m, cluster_tol)?;
        let distinct: Vec<f64> = spec.clusters.iter().map(|c| c.value).collect();
        let mult_one = spec
            .nearest_cluster(k)
            .map(|i| spec.clusters[i].multiplicity == 1 && close(spec.clusters[i].value, k, cluster_tol, &distinct))
            .unwrap_or(false);
        (Some(distinct.len()), distinct, has_one_eigvec && mult_one)
    } else {
        (None, Vec::new(), false)
    };

    Ok(ConditionReport {
        has_one_eigvec,
        k,
        mult_one,
        s,
        needed: g.diameter() + 1,
        symmetric,
        nonnegative,
        irreducible,
        distinct,
    })
}

fn close(a: f64, b: f64, tol: f64, values: &[f64]) -> bool {
    let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    (a - b).abs() <= tol * scale
}

/// Factors `(M - λ_t I)/(k - λ_t)` over the distinct eigenvalues `λ_t ≠ k`,
/// ascending unless that product drifts past [`STABLE_RESIDUAL`] and the Leja
/// order does better.
pub fn build_schedule(m: &Matrix, g: &Graph, construction: Construction) -> Result<Schedule> {
    build_schedule_with_tol(m, g, construction, DEFAULT_CLUSTER_TOL)
}

pub fn build_schedule_with_tol(m: &Matrix, g: &Graph, construction: Construction, cluster_tol: f64) -> Result<Schedule> {
    let report = check_conditions_with_tol(m, g, cluster_tol)?;
    if !report.admits_schedule() {
        return Err(Error::Conditions(report.failures().join(", ")));
    }
    let k = report.k;
    let scale = report.distinct.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
    let near_k: Vec<usize> =
        (0..report.distinct.len()).filter(|&i| (report.distinct[i] - k).abs() <= cluster_tol * scale).collect();
    if near_k.len() != 1 {
        return Err(Error::Conditions(format!("{} eigenvalue clusters match k = {k}", near_k.len())));
    }
    let lambdas: Vec<f64> =
        report.distinct.iter().enumerate().filter(|&(i, _)| i != near_k[0]).map(|(_, &v)| v).collect();
    for &lambda in &lambdas {
        let denom = k - lambda;
        if denom.abs() <= cluster_tol * scale {
            return Err(Error::Conditions(format!("k - λ = {denom} too small")));
        }
    }
    let n = g.n();
    let make = |order: Vec<f64>| {
        let factors = order.iter().map(|&l| m.shift_diag(-l).scale(1.0 / (k - l))).collect();
        Schedule { n, factors, construction: construction.clone(), meta: Some(SpectralMeta { k, lambdas: order }) }
    };
    let averaging = Matrix::averaging(n);
    let ascending = make(lambdas.clone());
    let residual = ascending.product().max_abs_diff(&averaging);
    if residual <= STABLE_RESIDUAL {
        return Ok(ascending);
    }
    let leja = make(leja_order(&lambdas));
    if leja.product().max_abs_diff(&averaging) < residual {
        Ok(leja)
    } else {
        Ok(ascending)
    }
}

/// Ascending-order residual above which [`build_schedule`] tries [`leja_order`].
pub const STABLE_RESIDUAL: f64 = 1e-12;

/// Greedy Leja ordering: start at the smallest value, then repeatedly take the
/// value farthest (in product of distances) from those already chosen. Ties go
/// to the smaller value. Keeps partial products of `(M - λI)` well scaled.
pub fn leja_order(values: &[f64]) -> Vec<f64> {
    let mut rest: Vec<f64> = values.to_vec();
    rest.sort_by(f64::total_cmp);
    let mut out = Vec::with_capacity(rest.len());
    if rest.is_empty() {
        return out;
    }
    out.push(rest.remove(0));
    let mut score: Vec<f64> = rest.iter().map(|x| (x - out[0]).abs().ln()).collect();
    while !rest.is_empty() {
        let best = (0..rest.len()).fold(0, |b, i| if score[i] > score[b] { i } else { b });
        let chosen = rest.remove(best);
        score.remove(best);
        for (s, x) in score.iter_mut().zip(&rest) {
            *s += (x - chosen).abs().ln();
        }
        out.push(chosen);
    }
    out
}

/// Outcome of checking a schedule against the averaging matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verification {
    /// `max |(A^(t) ⋯ A^(1))_ij - 1/n|`.
    pub residual: f64,
    pub compliant: bool,
    /// `(step, i, j)` of the first non-edge nonzero, 0-based step.
    pub violation: Option<(usize, usize, usize)>,
    pub tol: f64,
    pub passed: bool,
}

pub fn verify_schedule(s: &Schedule, g: &Graph, tol: f64) -> Result<Verification> {
    if s.n != g.n() {
        return Err(Error::Dimension { expected: g.n(), got: s.n });
    }
    let mut violation = None;
    for (t, f) in s.factors.iter().enumerate() {
        if let Some((i, j)) = compliance_violation(f, g)? {
            violation = Some((t, i, j));
            break;
        }
    }
    let residual = s.product().max_abs_diff(&Matrix::averaging(g.n()));
    let compliant = violation.is_none();
    Ok(Verification { residual, compliant, violation, tol, passed: compliant && residual <= tol })
}

/// Construction methods selectable by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Auto,
    Adjacency,
    LaplacianShift,
    Path,
    Tree,
    BfsTree,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "auto" => Method::Auto,
            "adjacency" => Method::Adjacency,
            "laplacian-shift" => Method::LaplacianShift,
            "path" => Method::Path,
            "tree" => Method::Tree,
            "bfs-tree" => Method::BfsTree,
            other => return Err(Error::InvalidArgument(format!("unknown method {other:?}"))),
        })
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Auto => "auto",
            Method::Adjacency => "adjacency",
            Method::LaplacianShift => "laplacian-shift",
            Method::Path => "path",
            Method::Tree => "tree",
            Method::BfsTree => "bfs-tree",
        })
    }
}

/// Builds a schedule with one named method (no verification beyond construction).
pub fn synthesize(g: &Graph, method: Method) -> Result<Schedule> {
    match method {
        Method::Auto => Ok(auto_synthesize(g)),
        Method::Adjacency => build_schedule(&candidate_adjacency(g)?, g, Construction::Adjacency),
        Method::LaplacianShift => build_schedule(&candidate_laplacian_shift(g), g, Construction::LaplacianShift),
        Method::Path => build_schedule(&candidate_path_for(g)?, g, Construction::Path),
        Method::Tree => tree::gather_distribute(g),
        Method::BfsTree => Ok(tree::bfs_fallback(g)),
    }
}

/// Every applicable construction, in preference order, with its verification.
///
/// The order is path, adjacency, laplacian-shift, tree, bfs-tree. Constructions
/// whose preconditions fail are omitted.
pub fn candidates(g: &Graph) -> Vec<(Schedule, Verification)> {
    let mut methods = Vec::new();
    if g.is_path() {
        methods.push(Method::Path);
    }
    if g.regular_degree().is_some() {
        methods.push(Method::Adjacency);
    }
    methods.push(Method::LaplacianShift);
    if g.is_tree() {
        methods.push(Method::Tree);
    }
    methods.push(Method::BfsTree);
    methods
        .into_iter()
        .filter_map(|m| synthesize(g, m).ok())
        .filter_map(|s| {
            let v = verify_schedule(&s, g, DEFAULT_VERIFY_TOL).ok()?;
            v.passed.then_some((s, v))
        })
        .collect()
}

/// Shortest verified schedule among [`candidates`]; ties go to the earlier construction.
///
/// The BFS-tree fallback always verifies, so this never fails on a connected graph.
pub fn auto_synthesize(g: &Graph) -> Schedule {
    candidates(g)
        .into_iter()
        .map(|(s, _)| s)
        .min_by_key(Schedule::steps)
        .unwrap_or_else(|| tree::bfs_fallback(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::matrix::chain_product;

    #[test]
    fn adjacency_candidate_requires_regularity() {
        assert!(candidate_adjacency(&families::cycle(4)).is_ok());
        assert!(matches!(candidate_adjacency(&families::path(3)), Err(Error::NotRegular { min: 1, max: 2 })));
    }

    #[test]
    fn laplacian_shift_row_sums() {
        let g = families::counterexample();
        let m = candidate_laplacian_shift(&g);
        assert!(m.row_sums().iter().all(|&s| s == 4.0));
        let r = check_conditions(&m, &g).unwrap();
        assert!(r.admits_schedule());
        assert_eq!((r.s, r.needed), (Some(4), 3));
        assert!(!r.diameter_length());
    }

    #[test]
    fn laplacian_shift_on_complete_graph() {
        // Laplacian of K_n has spectrum {0, n}; shifting by n - 1 keeps two distinct values
        let g = families::complete(6);
        let m = candidate_laplacian_shift(&g);
        assert_eq!(m, g.adjacency());
        let s = build_schedule(&m, &g, Construction::LaplacianShift).unwrap();
        assert_eq!(s.steps(), 1);
        assert!(s.factors[0].max_abs_diff(&Matrix::averaging(6)) < 1e-12);
    }

    #[test]
    fn path_candidate() {
        assert!(candidate_path(1).is_err());
        let m2 = candidate_path(2).unwrap();
        assert_eq!(m2, Matrix::filled(2, 2, 1.0));
        let s = build_schedule(&m2, &families::path(2), Construction::Path).unwrap();
        assert_eq!(s.steps(), 1);
        assert!(s.factors[0].max_abs_diff(&Matrix::averaging(2)) < 1e-15);
    }

    #[test]
    fn path3_schedule_matches_hand_product() {
        // M^2 = I + J for M = A_P3 + diag(1,0,1), so (M - I)(M + I) = J and k - λ gives 3·1 = 3
        let g = families::path(3);
        let m = candidate_path(3).unwrap();
        let s = build_schedule(&m, &g, Construction::Path).unwrap();
        assert_eq!(s.steps(), 2);
        let hand = m.shift_diag(-1.0).matmul(&m.shift_diag(1.0)).scale(1.0 / 3.0);
        assert!(hand.max_abs_diff(&Matrix::averaging(3)) < 1e-15);
        assert!(s.product().max_abs_diff(&hand) < 1e-14);
    }

    #[test]
    fn complete_graph_single_factor() {
        let g = families::complete(5);
        let s = synthesize(&g, Method::Adjacency).unwrap();
        assert_eq!(s.steps(), 1);
        assert!(s.factors[0].max_abs_diff(&Matrix::averaging(5)) < 1e-14);
    }

    #[test]
    fn check_conditions_flags() {
        let g = families::pappus();
        let r = check_conditions(&g.adjacency(), &g).unwrap();
        assert!(r.diameter_length());
        assert_eq!(r.k, 3.0);

        let mut asym = g.adjacency();
        asym[(0, 1)] = 2.0;
        let r = check_conditions(&asym, &g).unwrap();
        assert!(!r.symmetric);
        assert_eq!(r.s, None);
        assert!(build_schedule(&asym, &g, Construction::Other("x".into())).is_err());

        assert!(matches!(check_conditions(&Matrix::filled(18, 18, 1.0), &g), Err(Error::NonCompliant { .. })));
    }

    #[test]
    fn reducible_candidate_is_rejected() {
        let g = families::path(3);
        let err = build_schedule(&Matrix::identity(3), &g, Construction::Other("identity".into())).unwrap_err();
        assert!(matches!(err, Error::Conditions(_)));
    }

    #[test]
    fn verification_outcomes() {
        let g = families::path(3);
        let id = Schedule::new(3, vec![Matrix::identity(3)], Construction::Other("identity".into()));
        let v = verify_schedule(&id, &g, DEFAULT_VERIFY_TOL).unwrap();
        assert!((v.residual - 2.0 / 3.0).abs() < 1e-15);
        assert!(v.compliant && !v.passed);

        let mut s = synthesize(&g, Method::Path).unwrap();
        assert!(verify_schedule(&s, &g, DEFAULT_VERIFY_TOL).unwrap().passed);
        s.factors[1][(0, 2)] = 1.0;
        let v = verify_schedule(&s, &g, DEFAULT_VERIFY_TOL).unwrap();
        assert_eq!(v.violation, Some((1, 0, 2)));
        assert!(!v.passed);

        let wrong = Schedule::new(4, vec![], Construction::Search);
        assert!(verify_schedule(&wrong, &g, 1e-9).is_err());
    }

    #[test]
    fn auto_prefers_shortest() {
        assert_eq!(auto_synthesize(&families::pappus()).steps(), 4);
        assert_eq!(auto_synthesize(&families::pappus()).construction, Construction::Adjacency);
        assert_eq!(auto_synthesize(&families::counterexample()).steps(), 3);
        assert_eq!(auto_synthesize(&families::path(6)).steps(), 5);
        assert_eq!(auto_synthesize(&families::path(6)).construction, Construction::Path);
        assert_eq!(auto_synthesize(&families::star(4)).steps(), 2);
    }

    #[test]
    fn spectral_factors_commute() {
        let g = families::petersen();
        let s = synthesize(&g, Method::Adjacency).unwrap();
        let rev: Vec<Matrix> = s.factors.iter().rev().cloned().collect();
        assert!(chain_product(10, &rev).max_abs_diff(&Matrix::averaging(10)) < 1e-12);
    }

    #[test]
    fn leja_order_spreads_points() {
        assert_eq!(leja_order(&[0.0, 1.0, 2.0, 3.0]), vec![0.0, 3.0, 1.0, 2.0]);
        assert!(leja_order(&[]).is_empty());
    }

    #[test]
    fn long_path_stays_accurate() {
        let g = families::path(60);
        let s = synthesize(&g, Method::Path).unwrap();
        assert_eq!(s.steps(), 59);
        assert!(verify_schedule(&s, &g, 1e-12).unwrap().passed);
    }

    #[test]
    fn short_spectra_keep_ascending_order() {
        let s = synthesize(&families::pappus(), Method::Adjacency).unwrap();
        let l = &s.meta.unwrap().lambdas;
        assert!(l.windows(2).all(|w| w[0] < w[1]));
    }
}
