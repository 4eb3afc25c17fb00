//! Symmetric eigendecomposition, distinct-eigenvalue clustering and the
//! structural checks (compliance, irreducibility) used by the synthesis code.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matrix::Matrix;

/// Relative symmetry tolerance accepted by [`sym_eig`].
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Jacobi stops once the off-diagonal Frobenius norm drops below this fraction of `‖M‖_F`.
pub const JACOBI_OFF_TOL: f64 = 1e-13;
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Default relative gap separating two distinct eigenvalues.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;

/// A group of numerically equal eigenvalues.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cluster {
    /// Mean of the member eigenvalues.
    pub value: f64,
    pub multiplicity: usize,
}

#[derive(Clone, Debug)]
pub struct Spectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `i` is the unit eigenvector for `eigenvalues[i]`.
    pub eigenvectors: Matrix,
    pub clusters: Vec<Cluster>,
}

impl Spectrum {
    /// Number of distinct eigenvalues.
    pub fn distinct(&self) -> usize {
        self.clusters.len()
    }

    /// Index of the cluster whose value is closest to `x`.
    pub fn nearest_cluster(&self, x: f64) -> Option<usize> {
        self.clusters
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1.value - x).abs().total_cmp(&(b.1.value - x).abs()))
            .map(|(i, _)| i)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinimalPolyInfo {
    pub degree: usize,
    /// Distinct eigenvalues, ascending; the minimal polynomial is `∏ (x - root)`.
    pub roots: Vec<f64>,
}

/// Eigenvalues and orthonormal eigenvectors of a symmetric matrix by cyclic
/// Jacobi rotations, with clustering at [`DEFAULT_CLUSTER_TOL`].
pub fn sym_eig(m: &Matrix) -> Result<Spectrum> {
    sym_eig_with_tol(m, DEFAULT_CLUSTER_TOL)
}

pub fn sym_eig_with_tol(m: &Matrix, cluster_tol: f64) -> Result<Spectrum> {
    if !m.is_square() {
        return Err(Error::Dimension { expected: m.rows(), got: m.cols() });
    }
    if !m.is_symmetric(SYMMETRY_TOL) {
        return Err(Error::Asymmetric);
    }
    let n = m.rows();
    // symmetrize exactly so rotations act on one consistent matrix
    let mut a = m.add(&m.transpose()).scale(0.5);
    let mut v = Matrix::identity(n);
    let threshold = JACOBI_OFF_TOL * a.frobenius();

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > threshold {
        return Err(Error::NoConvergence { sweeps: JACOBI_MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)]).collect();
    let mut eigenvectors = Matrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        for r in 0..n {
            eigenvectors[(r, col)] = v[(r, src)];
        }
    }
    let clusters = cluster_distinct(&eigenvalues, cluster_tol);
    Ok(Spectrum { eigenvalues, eigenvectors, clusters })
}

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// One Jacobi rotation annihilating `a[p][q]`, accumulated into `v`.
fn rotate(a: &mut Matrix, v: &mut Matrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    if apq == 0.0 {
        return;
    }
    let n = a.rows();
    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = c * akp - s * akq;
        a[(k, q)] = s * akp + c * akq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = c * apk - s * aqk;
        a[(q, k)] = s * apk + c * aqk;
    }
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

/// Greedy gap clustering of sorted eigenvalues: a new cluster starts whenever
/// consecutive values differ by more than `tol · max(1, max|λ|)`.
pub fn cluster_distinct(sorted: &[f64], tol: f64) -> Vec<Cluster> {
    debug_assert!(sorted.windows(2).all(|w| w[0] <= w[1]), "input must be sorted");
    let scale = sorted.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let gap = tol * scale;
    let mut clusters = Vec::new();
    let mut start = 0;
    for i in 1..=sorted.len() {
        if i == sorted.len() || sorted[i] - sorted[i - 1] > gap {
            let members = &sorted[start..i];
            if !members.is_empty() {
                clusters.push(Cluster {
                    value: members.iter().sum::<f64>() / members.len() as f64,
                    multiplicity: members.len(),
                });
            }
            start = i;
        }
    }
    clusters
}

/// Minimal polynomial of a symmetric matrix: one linear factor per distinct eigenvalue.
pub fn minimal_poly_degree(m: &Matrix) -> Result<MinimalPolyInfo> {
    minimal_poly_degree_with_tol(m, DEFAULT_CLUSTER_TOL)
}

pub fn minimal_poly_degree_with_tol(m: &Matrix, tol: f64) -> Result<MinimalPolyInfo> {
    let spec = sym_eig_with_tol(m, tol)?;
    let roots: Vec<f64> = spec.clusters.iter().map(|c| c.value).collect();
    Ok(MinimalPolyInfo { degree: roots.len(), roots })
}

/// True iff the digraph with an arc `i -> j` whenever `m[j][i] != 0` is strongly connected.
pub fn is_irreducible(m: &Matrix) -> bool {
    let n = m.rows();
    if n == 0 || !m.is_square() {
        return false;
    }
    let reach = |forward: bool| {
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0usize];
        while let Some(i) = stack.pop() {
            for j in 0..n {
                let entry = if forward { m[(j, i)] } else { m[(i, j)] };
                if !seen[j] && entry != 0.0 {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    reach(true) && reach(false)
}

/// First off-diagonal nonzero of `m` that does not sit on an edge of `g`.
pub fn compliance_violation(m: &Matrix, g: &Graph) -> Result<Option<(usize, usize)>> {
    let n = g.n();
    if m.rows() != n || m.cols() != n {
        return Err(Error::Dimension { expected: n, got: if m.rows() != n { m.rows() } else { m.cols() } });
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && m[(i, j)] != 0.0 && !g.has_edge(i, j) {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

/// Whether every off-diagonal nonzero of `m` sits on an edge of `g`.
pub fn complies(m: &Matrix, g: &Graph) -> Result<bool> {
    Ok(compliance_violation(m, g)?.is_none())
}

/// Smallest `d <= max_deg` such that `Σ_{k≤d} |M|^k` has no zero entry.
///
/// Works on the support pattern, so there is no cancellation or overflow.
pub fn no_zero_entry_witness(m: &Matrix, max_deg: usize) -> Option<usize> {
    let n = m.rows();
    let support: Vec<Vec<usize>> =
        (0..n).map(|i| (0..n).filter(|&j| m[(i, j)] != 0.0).collect()).collect();
    // covered[i][j]: some power k <= d has a nonzero (i, j) entry
    let mut power: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect();
    let mut covered = power.clone();
    for d in 0..=max_deg {
        if covered.iter().all(|row| row.iter().all(|&c| c)) {
            return Some(d);
        }
        let next: Vec<Vec<bool>> = (0..n)
            .map(|i| {
                let mut row = vec![false; n];
                for &k in &support[i] {
                    for j in 0..n {
                        row[j] |= power[k][j];
                    }
                }
                row
            })
            .collect();
        power = next;
        for i in 0..n {
            for j in 0..n {
                covered[i][j] |= power[i][j];
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    fn reconstruct(s: &Spectrum) -> Matrix {
        let q = &s.eigenvectors;
        q.matmul(&Matrix::diag(&s.eigenvalues)).matmul(&q.transpose())
    }

    #[test]
    fn diagonal_matrix() {
        let s = sym_eig(&Matrix::diag(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(s.eigenvalues, vec![1.0, 2.0, 3.0]);
        assert_eq!(s.eigenvectors[(1, 0)].abs(), 1.0);
        assert_eq!(s.eigenvectors[(2, 1)].abs(), 1.0);
        assert_eq!(s.eigenvectors[(0, 2)].abs(), 1.0);
    }

    #[test]
    fn path3_shifted_matrix() {
        // det(M - x I) = -(x - 2)(x - 1)(x + 1) for M = A_P3 + diag(1, 0, 1)
        let m = families::path(3).adjacency().add(&Matrix::diag(&[1.0, 0.0, 1.0]));
        let s = sym_eig(&m).unwrap();
        for (got, want) in s.eigenvalues.iter().zip([-1.0, 1.0, 2.0]) {
            assert!((got - want).abs() < 1e-14, "{got} vs {want}");
        }
        assert!(reconstruct(&s).max_abs_diff(&m) < 1e-14);
    }

    #[test]
    fn pappus_spectrum() {
        let s = sym_eig(&families::pappus().adjacency()).unwrap();
        let r3 = 3f64.sqrt();
        let expected = [(-3.0, 1), (-r3, 6), (0.0, 4), (r3, 6), (3.0, 1)];
        assert_eq!(s.distinct(), 5);
        for (c, (v, mult)) in s.clusters.iter().zip(expected) {
            assert!((c.value - v).abs() < 1e-12);
            assert_eq!(c.multiplicity, mult);
        }
    }

    #[test]
    fn rejects_asymmetric() {
        let m = Matrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]);
        assert_eq!(sym_eig(&m).unwrap_err(), Error::Asymmetric);
        assert_eq!(minimal_poly_degree(&m).unwrap_err(), Error::Asymmetric);
    }

    #[test]
    fn clustering_examples() {
        assert_eq!(cluster_distinct(&[0.0, 0.0, 0.0], 1e-8).len(), 1);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let c5 = [-phi, -phi, phi - 1.0, phi - 1.0, 2.0];
        let cl = cluster_distinct(&c5, 1e-8);
        assert_eq!(cl.iter().map(|c| c.multiplicity).collect::<Vec<_>>(), vec![2, 2, 1]);
        assert!(cluster_distinct(&[], 1e-8).is_empty());
    }

    #[test]
    fn minimal_polynomials() {
        assert_eq!(minimal_poly_degree(&Matrix::identity(4)).unwrap().degree, 1);
        assert_eq!(minimal_poly_degree(&families::pappus().adjacency()).unwrap().degree, 5);
    }

    #[test]
    fn irreducibility() {
        assert!(is_irreducible(&families::petersen().adjacency()));
        assert!(!is_irreducible(&Matrix::zeros(3, 3)));
        let block = Matrix::from_rows(&[
            vec![1.0, 1.0, 0.0, 0.0],
            vec![1.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, 1.0],
            vec![0.0, 0.0, 1.0, 1.0],
        ]);
        assert!(!is_irreducible(&block));
        // one-way cycle is strongly connected
        let cyc = Matrix::from_rows(&[vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0], vec![1.0, 0.0, 0.0]]);
        assert!(is_irreducible(&cyc));
    }

    #[test]
    fn compliance() {
        let g = families::path(3);
        assert!(complies(&g.adjacency(), &g).unwrap());
        assert!(complies(&Matrix::identity(3), &g).unwrap());
        assert!(!complies(&Matrix::filled(3, 3, 1.0), &g).unwrap());
        assert_eq!(compliance_violation(&Matrix::filled(3, 3, 1.0), &g).unwrap(), Some((0, 2)));
        assert!(complies(&Matrix::identity(4), &g).is_err());
    }

    #[test]
    fn no_zero_entry_witnesses() {
        let g = families::cycle(7);
        let d = no_zero_entry_witness(&g.adjacency(), g.n()).unwrap();
        assert_eq!(d, 3);
        assert!(d < g.n());
        assert_eq!(no_zero_entry_witness(&Matrix::identity(3), 0), None);
        assert_eq!(no_zero_entry_witness(&Matrix::filled(2, 2, 1.0), 0), None);
        assert_eq!(no_zero_entry_witness(&Matrix::filled(2, 2, 1.0), 1), Some(1));
    }
}
