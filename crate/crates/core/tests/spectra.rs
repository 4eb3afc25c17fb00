use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ftcons::spectra::{cluster_distinct, minimal_poly_degree, sym_eig, DEFAULT_CLUSTER_TOL};
use ftcons::{families, Matrix};

fn symmetric(n: usize, entries: &[f64]) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    let mut it = entries.iter().cycle();
    for i in 0..n {
        for j in i..n {
            let v = *it.next().unwrap();
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

fn permuted(m: &Matrix, perm: &[usize]) -> Matrix {
    let n = m.rows();
    let mut p = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            p[(perm[i], perm[j])] = m[(i, j)];
        }
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn jacobi_reconstructs(n in 1usize..=64, entries in prop::collection::vec(-10.0f64..10.0, 1..200)) {
        let m = symmetric(n, &entries);
        let s = sym_eig(&m).unwrap();
        let q = &s.eigenvectors;
        prop_assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        let rebuilt = q.matmul(&Matrix::diag(&s.eigenvalues)).matmul(&q.transpose());
        let err = rebuilt.sub(&m).frobenius();
        prop_assert!(err <= 1e-10 * m.frobenius().max(1.0), "reconstruction {err:e}");
        let ortho = q.transpose().matmul(q).max_abs_diff(&Matrix::identity(n));
        prop_assert!(ortho <= 1e-10, "orthonormality {ortho:e}");
    }

    #[test]
    fn clusters_survive_relabeling_and_scaling(seed in any::<u64>(), n in 3usize..20, c in 0.1f64..10.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = families::random_connected(n, 0.3, &mut rng);
        let a = g.adjacency();
        let base = sym_eig(&a).unwrap().clusters;

        let perm: Vec<usize> = (0..n).rev().collect();
        let relabeled = sym_eig(&permuted(&a, &perm)).unwrap().clusters;
        prop_assert_eq!(base.len(), relabeled.len());
        for (x, y) in base.iter().zip(&relabeled) {
            prop_assert_eq!(x.multiplicity, y.multiplicity);
            prop_assert!((x.value - y.value).abs() < 1e-9);
        }

        let scaled = sym_eig(&a.scale(c)).unwrap().clusters;
        prop_assert_eq!(base.len(), scaled.len());
        for (x, y) in base.iter().zip(&scaled) {
            prop_assert_eq!(x.multiplicity, y.multiplicity);
            prop_assert!((x.value * c - y.value).abs() < 1e-9 * c.max(1.0));
        }
    }

    #[test]
    fn minimal_polynomial_exceeds_diameter(seed in any::<u64>(), n in 2usize..25, p in 0.0f64..0.6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = families::random_connected(n, p, &mut rng);
        let info = minimal_poly_degree(&g.adjacency()).unwrap();
        prop_assert!(info.degree > g.diameter(), "degree {} diameter {}", info.degree, g.diameter());
        prop_assert_eq!(info.roots.len(), info.degree);
    }

    #[test]
    fn cluster_multiplicities_sum(values in prop::collection::vec(-5.0f64..5.0, 1..40)) {
        let mut v = values;
        v.sort_by(f64::total_cmp);
        let clusters = cluster_distinct(&v, DEFAULT_CLUSTER_TOL);
        prop_assert_eq!(clusters.iter().map(|c| c.multiplicity).sum::<usize>(), v.len());
        prop_assert!(clusters.windows(2).all(|w| w[0].value < w[1].value));
    }
}
