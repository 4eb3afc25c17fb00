//! Acceptance suite. Each test prints one `[PASS]`/`[FAIL]` line; run with
//! `cargo test -p ftcons-cli --test acceptance -- --nocapture` to see them.

use std::collections::VecDeque;
use std::process::Command;
use std::time::{Duration, Instant};

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ftcons::feasibility::{
    als_restart, als_search, certify_two_step_infeasible, check_certificate, consensus_number_bounds, AlsOptions,
    BoundsOptions, TwoStepVerdict,
};
use ftcons::simulator::{random_initial, run_schedule, StateVector};
use ftcons::spectra::sym_eig;
use ftcons::synthesis::{
    build_schedule, candidate_adjacency, candidate_laplacian_shift, candidate_path, verify_schedule,
};
use ftcons::tree::{bfs_fallback, gather_distribute};
use ftcons::{families, Construction, Graph, Matrix, Schedule};

struct Criterion {
    label: &'static str,
    limit: Duration,
    start: Instant,
    failures: Vec<String>,
}

impl Criterion {
    fn new(label: &'static str, limit_secs: u64) -> Self {
        Self { label, limit: Duration::from_secs(limit_secs), start: Instant::now(), failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn finish(mut self) {
        let elapsed = self.start.elapsed();
        if elapsed > self.limit {
            self.failures.push(format!("runtime {elapsed:.2?} exceeds {:?}", self.limit));
        }
        let verdict = if self.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("[{verdict}] {} ({elapsed:.2?})", self.label);
        assert!(self.failures.is_empty(), "{}:\n  {}", self.label, self.failures.join("\n  "));
    }
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ftcons")).args(args).output().expect("run ftcons");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

/// Plain BFS eccentricity maximum, kept separate from the library's distance table.
fn bfs_diameter(g: &Graph) -> usize {
    let n = g.n();
    let mut adj = vec![Vec::new(); n];
    for (u, v) in g.edges() {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut best = 0;
    for s in 0..n {
        let mut dist = vec![usize::MAX; n];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        best = best.max(*dist.iter().max().unwrap());
    }
    best
}

fn bfs_radius(g: &Graph) -> usize {
    (0..g.n()).map(|v| g.eccentricity(v)).min().unwrap()
}

#[test]
fn criterion_1_pappus_reproduction() {
    let mut c = Criterion::new("criterion 1: Pappus spectrum, factors, residual, 4-step run", 1);
    let g = families::pappus();
    let a = g.adjacency();
    let n = 18;
    c.check(g.n() == n && g.edge_count() == 27, || "Pappus must have 18 nodes and 27 edges".into());

    let s3 = 3f64.sqrt();
    let expected = [(-3.0, 1), (-s3, 6), (0.0, 4), (s3, 6), (3.0, 1)];
    let spec = sym_eig(&a).unwrap();
    c.check(spec.clusters.len() == expected.len(), || format!("{} distinct eigenvalues", spec.clusters.len()));
    for (cl, (v, m)) in spec.clusters.iter().zip(expected) {
        c.check((cl.value - v).abs() < 1e-9 && cl.multiplicity == m, || {
            format!("cluster {}^({}) vs {v}^({m})", cl.value, cl.multiplicity)
        });
    }
    for (e, idx) in spec.eigenvalues.iter().zip(0..) {
        let want = expected.iter().flat_map(|&(v, m)| std::iter::repeat_n(v, m)).nth(idx).unwrap();
        c.check((e - want).abs() < 1e-9, || format!("eigenvalue {idx}: {e} vs {want}"));
    }

    let s = build_schedule(&candidate_adjacency(&g).unwrap(), &g, Construction::Adjacency).unwrap();
    let shift = |lambda: f64| a.shift_diag(-lambda).scale(1.0 / (3.0 - lambda));
    let displayed = [shift(-3.0), shift(-s3), shift(0.0), shift(s3)];
    c.check(s.steps() == 4, || format!("{} factors", s.steps()));
    for (t, (got, want)) in s.factors.iter().zip(&displayed).enumerate() {
        let d = got.max_abs_diff(want);
        c.check(d <= 1e-12, || format!("factor {} differs by {d:e}", t + 1));
    }
    let v = verify_schedule(&s, &g, 1e-10).unwrap();
    c.check(v.compliant && v.residual < 1e-10, || format!("residual {:e}", v.residual));

    let x0 = random_initial(n, -1.5, 1.5, 7).unwrap();
    c.check(x0.values.iter().all(|x| (-1.5..1.5).contains(x)), || "initial state outside [-1.5, 1.5)".into());
    let tr = run_schedule(&g, &s, &x0).unwrap();
    c.check(tr.states.len() == 5, || format!("{} states", tr.states.len()));
    c.check(tr.spread_at(4) < 1e-9, || format!("spread after 4 steps {:e}", tr.spread_at(4)));
    c.check(tr.spread_at(3) >= 1e-9, || "consensus reached before step 4".into());
    c.finish();
}

#[test]
fn criterion_2_path_family() {
    let mut c = Criterion::new("criterion 2: path family N = 2..50", 5);
    for n in 2..=50 {
        let m = candidate_path(n).unwrap();
        let spec = sym_eig(&m).unwrap();
        c.check(spec.distinct() == n, || format!("N={n}: {} distinct eigenvalues", spec.distinct()));
        let top = spec.clusters.last().unwrap().value;
        c.check((top - 2.0).abs() < 1e-9, || format!("N={n}: largest eigenvalue {top}"));
        let g = families::path(n);
        let s = build_schedule(&m, &g, Construction::Path).unwrap();
        let lambdas = &s.meta.as_ref().unwrap().lambdas;
        let mut sorted = lambdas.clone();
        sorted.sort_by(f64::total_cmp);
        let expected: Vec<f64> = spec.clusters[..n - 1].iter().map(|cl| cl.value).collect();
        c.check(sorted == expected, || format!("N={n}: schedule eigenvalues differ from the spectrum"));
        // raw product over every eigenvalue but 2, in schedule order
        let mut raw = Matrix::identity(n);
        for &l in lambdas {
            raw = m.shift_diag(-l).matmul(&raw);
        }
        let d = raw.max_abs_diff(&Matrix::filled(n, n, 1.0));
        c.check(d <= 1e-6 * n as f64, || format!("N={n}: raw product off 11ᵀ by {d:e}"));
        let v = verify_schedule(&s, &g, 1e-8).unwrap();
        c.check(s.steps() == n - 1, || format!("N={n}: {} factors", s.steps()));
        c.check(v.compliant && v.residual < 1e-8, || format!("N={n}: residual {:e}", v.residual));
    }
    c.finish();
}

#[test]
fn criterion_3_counterexample() {
    let mut c = Criterion::new("criterion 3: counterexample certificate, search, bounds", 30);
    let g = families::counterexample();
    c.check(g.n() == 10 && bfs_diameter(&g) == 2, || "G_cx must have 10 nodes and diameter 2".into());

    let (code, out) = cli(&["certify2", "@counterexample"]);
    c.check(code == 0, || format!("certify2 exit {code}"));
    for needle in [
        "a[6,3] = a[5,3]",
        "a[6,4] = a[7,4]",
        "contradiction: [AB][6,1] = a[6,3]*b[3,1] + a[6,4]*b[4,1]",
        "= 1 + 1",
        "sum = 2 ≠ 1",
        "exact check: [AB]/c = 2 (valid)",
    ] {
        c.check(out.contains(needle), || format!("certify2 output lacks {needle:?}"));
    }

    match certify_two_step_infeasible(&g) {
        TwoStepVerdict::Certified(cert) => {
            for scale in [1, -3, 7] {
                let r = check_certificate(&cert, &g, Rational64::from_integer(scale));
                c.check(r == Ok(Rational64::from_integer(2)), || format!("exact check at c={scale}: {r:?}"));
            }
        }
        other => c.check(false, || format!("library verdict {other:?}")),
    }

    let r = als_search(&g, 2, &AlsOptions { restarts: 100, ..Default::default() }).unwrap();
    c.check(r.witness.is_none(), || format!("t=2 search found a witness (residual {:e})", r.best_residual));

    let (code, out) = cli(&["bounds", "@counterexample"]);
    c.check(code == 0 && out.contains("consensus number = 3 (certified lower = upper)"), || {
        format!("bounds exit {code}:\n{out}")
    });
    c.check(out.contains("upper: 3 (laplacian-shift)"), || "upper bound not from laplacian-shift".into());
    let b = consensus_number_bounds(&g, &BoundsOptions { search: None, ..Default::default() });
    let w = &b.witnesses[0].schedule;
    c.check(b.is_exact() && b.upper == 3 && w.construction == Construction::LaplacianShift, || {
        format!("bounds [{}, {}] via {}", b.lower, b.upper, w.construction)
    });
    let m = candidate_laplacian_shift(&g);
    let k = m.row_sums().into_iter().fold(f64::MIN, f64::max);
    let s = sym_eig(&m).unwrap().distinct();
    c.check(k == 4.0 && s == 4, || format!("k={k}, s={s}"));
    c.check(w.meta.as_ref().is_some_and(|meta| meta.k == 4.0 && meta.lambdas.len() == 3), || {
        format!("witness meta {:?}", w.meta)
    });
    c.finish();
}

#[test]
fn criterion_4_distance_regular() {
    let mut c = Criterion::new("criterion 4: distance-regular suite", 5);
    let suite: [(&str, Graph, &str); 5] = [
        ("Petersen", families::petersen(), "{3,2;1,1}"),
        ("C5", families::cycle(5), "{2,1;1,1}"),
        ("C6", families::cycle(6), "{2,1,1;1,1,2}"),
        ("K33", families::complete_bipartite(3, 3), "{3,2;1,3}"),
        ("Q3", families::hypercube(3), "{3,2,1;1,2,3}"),
    ];
    for (name, g, array) in suite {
        let d = bfs_diameter(&g);
        c.check(g.diameter() == d, || format!("{name}: library diameter {} vs BFS {d}", g.diameter()));
        match g.intersection_array() {
            Some(ia) => c.check(ia.to_string() == array, || format!("{name}: array {ia} vs {array}")),
            None => c.check(false, || format!("{name}: not detected distance-regular")),
        }
        let s = build_schedule(&candidate_adjacency(&g).unwrap(), &g, Construction::Adjacency).unwrap();
        let v = verify_schedule(&s, &g, 1e-9).unwrap();
        c.check(s.steps() == d, || format!("{name}: {} factors, D = {d}", s.steps()));
        c.check(v.compliant && v.residual < 1e-9, || format!("{name}: residual {:e}", v.residual));
    }
    c.finish();
}

#[test]
fn criterion_5_trees() {
    let mut c = Criterion::new("criterion 5: random trees and BFS fallback", 30);
    let mut rng = ChaCha8Rng::seed_from_u64(20_160_915);
    for case in 0..200 {
        let n = rng.gen_range(2..=200);
        let t = families::random_tree(n, &mut rng);
        let s = gather_distribute(&t).unwrap();
        let d = bfs_diameter(&t);
        let v = verify_schedule(&s, &t, 1e-12).unwrap();
        c.check(s.steps() == d, || format!("tree {case} (n={n}): {} steps, D = {d}", s.steps()));
        c.check(v.compliant && v.residual < 1e-12, || format!("tree {case} (n={n}): residual {:e}", v.residual));
    }
    for case in 0..50 {
        let n = rng.gen_range(2..=60);
        let p = rng.gen_range(0.0..0.3);
        let g = families::random_connected(n, p, &mut rng);
        let s = bfs_fallback(&g);
        let r = bfs_radius(&g);
        let v = verify_schedule(&s, &g, 1e-12).unwrap();
        c.check(s.steps() <= 2 * r, || format!("graph {case} (n={n}): {} steps, R = {r}", s.steps()));
        c.check(v.compliant && v.residual < 1e-12, || format!("graph {case} (n={n}): residual {:e}", v.residual));
    }
    c.finish();
}

fn spectral_instances(rng: &mut ChaCha8Rng) -> Vec<(Graph, Schedule)> {
    let mut out = Vec::new();
    while out.len() < 40 {
        let n = rng.gen_range(3..=14);
        let g = families::random_connected(n, rng.gen_range(0.1..0.7), rng);
        if let Ok(s) = build_schedule(&candidate_laplacian_shift(&g), &g, Construction::LaplacianShift) {
            out.push((g, s));
        }
    }
    out
}

#[test]
fn criterion_6_invariants() {
    let mut c = Criterion::new("criterion 6: invariant suite", 60);
    let mut rng = ChaCha8Rng::seed_from_u64(6);

    for (idx, (g, s)) in spectral_instances(&mut rng).into_iter().enumerate() {
        let n = g.n();
        for a in 0..s.steps() {
            for b in a + 1..s.steps() {
                let (fa, fb) = (&s.factors[a], &s.factors[b]);
                let d = fa.matmul(fb).max_abs_diff(&fb.matmul(fa)) / (fa.frobenius() * fb.frobenius());
                c.check(d < 1e-12, || format!("instance {idx}: factors {a},{b} commute only to {d:e}"));
            }
        }
        for (t, f) in s.factors.iter().enumerate() {
            let worst = f.row_sums().iter().fold(0.0f64, |m, r| m.max((r - 1.0).abs()));
            c.check(worst < 1e-10, || format!("instance {idx}: factor {t} row sums off by {worst:e}"));
        }
        let x0 = random_initial(n, -1.0, 1.0, idx as u64).unwrap();
        let tr = run_schedule(&g, &s, &x0).unwrap();
        for st in &tr.states {
            let mean = st.values.iter().sum::<f64>() / n as f64;
            c.check((mean - tr.initial_mean).abs() < 1e-10, || {
                format!("instance {idx}: mean drifts to {mean} at step {}", st.step)
            });
        }
    }

    // simulator rounds against dense products, bit for bit
    for case in 0..30 {
        let n = rng.gen_range(2..=40);
        let g = families::random_connected(n, rng.gen_range(0.0..0.4), &mut rng);
        let s = if case % 2 == 0 { bfs_fallback(&g) } else { ftcons::synthesis::auto_synthesize(&g) };
        let x0 = StateVector { values: (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect(), step: 0 };
        let tr = run_schedule(&g, &s, &x0).unwrap();
        let mut x = x0.values.clone();
        for (t, f) in s.factors.iter().enumerate() {
            x = f.mul_vec(&x);
            let same = x.iter().zip(&tr.states[t + 1].values).all(|(p, q)| p.to_bits() == q.to_bits());
            c.check(same, || format!("case {case}: simulator differs from product at step {}", t + 1));
        }
    }

    // block updates never raise the residual
    for case in 0..12 {
        let n = rng.gen_range(3..=9);
        let g = families::random_connected(n, 0.4, &mut rng);
        let t = rng.gen_range(1..=3);
        let opts = AlsOptions { sweeps: 60, seed: case, ..Default::default() };
        let run = als_restart(&g, t, &opts, 0, true);
        for (k, w) in run.trace.windows(2).enumerate() {
            c.check(w[1] <= w[0] * (1.0 + 1e-9) + 1e-24, || {
                format!("case {case}: residual² rose {:e} -> {:e} at update {k}", w[0], w[1])
            });
        }
    }

    // no certificate where a two-step witness exists
    let mut witnessed = 0;
    let mut tries = 0;
    while witnessed < 8 && tries < 400 {
        tries += 1;
        let n = rng.gen_range(4..=9);
        let g = families::random_connected(n, rng.gen_range(0.3..0.8), &mut rng);
        if g.diameter() != 2 {
            continue;
        }
        let verdict = certify_two_step_infeasible(&g);
        let r = als_search(&g, 2, &AlsOptions { restarts: 8, sweeps: 300, seed: tries, ..Default::default() }).unwrap();
        if let Some(w) = &r.witness {
            witnessed += 1;
            let v = verify_schedule(w, &g, 1e-8).unwrap();
            c.check(v.passed, || format!("try {tries}: witness fails verification"));
            c.check(!matches!(verdict, TwoStepVerdict::Certified(_)), || {
                format!("try {tries}: certificate issued although a two-step witness exists")
            });
        }
    }
    c.check(witnessed >= 8, || format!("only {witnessed} two-step witnesses in {tries} tries"));
    c.finish();
}
