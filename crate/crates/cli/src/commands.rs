use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use num_rational::Rational64;

use ftcons::feasibility::{
    als_search, certify_two_step_infeasible, check_certificate, consensus_number_bounds, AlsOptions,
    BoundsOptions, LowerReason, TwoStepVerdict,
};
use ftcons::simulator::{export_trajectory, random_initial, run_schedule, StateVector, RNG_NAME};
use ftcons::spectra::sym_eig_with_tol;
use ftcons::synthesis::{
    build_schedule_with_tol, candidate_adjacency, candidate_laplacian_shift, candidate_path_for, synthesize as build,
    verify_schedule, Method,
};
use ftcons::{families, Construction, Error, Graph, Schedule};

use crate::GraphArg;

/// What a command printed and the exit code it maps to.
pub struct Outcome {
    pub code: u8,
    pub report: String,
}

impl Outcome {
    fn ok(report: String) -> Self {
        Self { code: 0, report }
    }

    fn negative(report: String) -> Self {
        Self { code: 1, report }
    }
}

fn load_graph(arg: &GraphArg) -> Result<Graph> {
    if let Some(name) = arg.graph.strip_prefix('@') {
        return families::by_name(name).with_context(|| format!("unknown built-in graph {name:?}"));
    }
    let text = fs::read_to_string(&arg.graph).with_context(|| format!("reading {}", arg.graph))?;
    Graph::parse_edge_list(&text, arg.nodes).with_context(|| format!("parsing {}", arg.graph))
}

fn load_schedule(path: &Path) -> Result<Schedule> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Schedule::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

pub fn analyze(arg: &GraphArg, cluster_tol: f64) -> Result<Outcome> {
    let g = load_graph(arg)?;
    let m = g.metrics();
    let mut r = String::new();
    writeln!(r, "nodes: {}", g.n())?;
    writeln!(r, "edges: {}", g.edge_count())?;
    writeln!(r, "diameter: {}", m.diameter)?;
    writeln!(r, "radius: {}", m.radius)?;
    writeln!(r, "center: {}", join(&m.central_nodes))?;
    match g.regular_degree() {
        Some(k) => writeln!(r, "regularity: {k}-regular")?,
        None => {
            let d = g.degrees();
            writeln!(
                r,
                "regularity: not regular (degrees {}..={})",
                d.iter().min().unwrap(),
                d.iter().max().unwrap()
            )?
        }
    }
    writeln!(r, "tree: {}", if g.is_tree() { "yes" } else { "no" })?;
    match g.intersection_array() {
        Some(ia) => writeln!(r, "distance-regular: yes {ia}")?,
        None => writeln!(r, "distance-regular: no")?,
    }
    let spec = sym_eig_with_tol(&g.adjacency(), cluster_tol)?;
    let parts: Vec<String> = spec.clusters.iter().map(|c| format!("{:.9}^({})", c.value, c.multiplicity)).collect();
    writeln!(r, "adjacency spectrum: {}", parts.join(" "))?;
    writeln!(r, "distinct eigenvalues: s={}", spec.distinct())?;
    writeln!(r, "cluster tolerance: {cluster_tol:e}")?;
    Ok(Outcome::ok(r))
}

pub fn synthesize(arg: &GraphArg, method: &str, out: Option<&Path>, tol: f64, cluster_tol: f64) -> Result<Outcome> {
    let g = load_graph(arg)?;
    let method: Method = method.parse()?;
    let attempt = match method {
        Method::Adjacency => {
            candidate_adjacency(&g).and_then(|m| build_schedule_with_tol(&m, &g, Construction::Adjacency, cluster_tol))
        }
        Method::LaplacianShift => {
            build_schedule_with_tol(&candidate_laplacian_shift(&g), &g, Construction::LaplacianShift, cluster_tol)
        }
        Method::Path => {
            candidate_path_for(&g).and_then(|m| build_schedule_with_tol(&m, &g, Construction::Path, cluster_tol))
        }
        other => build(&g, other),
    };
    let schedule = match attempt {
        Ok(s) => s,
        Err(e @ (Error::NotRegular { .. } | Error::NotPath | Error::NotTree { .. } | Error::Conditions(_))) => {
            return Ok(Outcome::negative(format!("method: {method}\nverdict: INAPPLICABLE ({e})\n")));
        }
        Err(e) => return Err(e.into()),
    };
    let v = verify_schedule(&schedule, &g, tol)?;
    let mut r = String::new();
    writeln!(r, "method: {method}")?;
    writeln!(r, "construction: {}", schedule.construction)?;
    writeln!(r, "steps: {}", schedule.steps())?;
    writeln!(r, "diameter: {}", g.diameter())?;
    if let Some(meta) = &schedule.meta {
        let lambdas: Vec<String> = meta.lambdas.iter().map(|l| format!("{l:.9}")).collect();
        writeln!(r, "k: {:.9}", meta.k)?;
        writeln!(r, "lambdas: {}", lambdas.join(" "))?;
    }
    writeln!(r, "residual: {:.3e}", v.residual)?;
    writeln!(r, "tolerance: {tol:e}")?;
    if !v.passed {
        writeln!(r, "verdict: FAIL")?;
        return Ok(Outcome::negative(r));
    }
    writeln!(r, "verdict: PASS")?;
    if let Some(path) = out {
        fs::write(path, schedule.to_json()).with_context(|| format!("writing {}", path.display()))?;
        writeln!(r, "written: {}", path.display())?;
    }
    Ok(Outcome::ok(r))
}

pub fn verify(arg: &GraphArg, schedule: &Path, tol: f64) -> Result<Outcome> {
    let g = load_graph(arg)?;
    let s = load_schedule(schedule)?;
    let v = verify_schedule(&s, &g, tol)?;
    let mut r = String::new();
    writeln!(r, "steps: {}", s.steps())?;
    writeln!(r, "construction: {}", s.construction)?;
    writeln!(r, "residual: {:.3e}", v.residual)?;
    writeln!(r, "tolerance: {tol:e}")?;
    match v.violation {
        None => writeln!(r, "compliant: yes")?,
        Some((t, i, j)) => writeln!(r, "compliant: no (step {} entry ({i},{j}) is not an edge)", t + 1)?,
    }
    let verdict = match (v.compliant, v.passed) {
        (_, true) => "PASS",
        (false, _) => "non-compliant FAIL",
        (true, false) => "residual FAIL",
    };
    writeln!(r, "verdict: {verdict}")?;
    Ok(if v.passed { Outcome::ok(r) } else { Outcome::negative(r) })
}

fn read_x0(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().with_context(|| format!("bad initial value {s:?}")))
        .collect()
}

pub fn simulate(
    arg: &GraphArg,
    schedule: &Path,
    seed: u64,
    x0: Option<&Path>,
    lo: f64,
    hi: f64,
    csv: Option<&Path>,
) -> Result<Outcome> {
    let g = load_graph(arg)?;
    let s = load_schedule(schedule)?;
    let (x0, source) = match x0 {
        Some(path) => {
            let values = read_x0(path)?;
            if values.len() != g.n() {
                bail!("initial state has {} values, graph has {} nodes", values.len(), g.n());
            }
            (StateVector { values, step: 0 }, format!("file {}", path.display()))
        }
        None => (random_initial(g.n(), lo, hi, seed)?, format!("rng={RNG_NAME} seed={seed} range=[{lo},{hi})")),
    };
    let tr = run_schedule(&g, &s, &x0)?;
    let mut r = String::new();
    writeln!(r, "steps: {}", s.steps())?;
    writeln!(r, "initial: {source}")?;
    writeln!(r, "initial_mean: {:.12}", tr.initial_mean)?;
    for t in 0..tr.states.len() {
        writeln!(r, "spread[{t}]: {:.3e}", tr.spread_at(t))?;
    }
    writeln!(r, "final_spread: {:.3e}", tr.final_spread)?;
    if let Some(path) = csv {
        let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
        export_trajectory(&tr, std::io::BufWriter::new(file), &[format!("initial {source}")])?;
        writeln!(r, "csv: {}", path.display())?;
    }
    Ok(Outcome::ok(r))
}

pub fn certify2(arg: &GraphArg) -> Result<Outcome> {
    let g = load_graph(arg)?;
    Ok(match certify_two_step_infeasible(&g) {
        TwoStepVerdict::Certified(cert) => {
            let ratio = check_certificate(&cert, &g, Rational64::from_integer(1))
                .map_err(|e| anyhow::anyhow!("certificate failed its own exact check: {e}"))?;
            Outcome::ok(format!("{cert}\nexact check: [AB]/c = {ratio} (valid)\n"))
        }
        TwoStepVerdict::ImpossibleByDiameter(d) => {
            Outcome::ok(format!("D = {d} > 2: two steps impossible a priori\n"))
        }
        TwoStepVerdict::TriviallyFeasible => {
            Outcome::negative("D = 1: the averaging matrix complies; no certificate possible\n".into())
        }
        TwoStepVerdict::NoCertificate => Outcome::negative("no certificate found\n".into()),
    })
}

pub fn search(arg: &GraphArg, steps: usize, restarts: usize, iters: usize, seed: u64, out: Option<&Path>) -> Result<Outcome> {
    let g = load_graph(arg)?;
    if steps == 0 {
        bail!("--steps must be at least 1");
    }
    let opts = AlsOptions { restarts, sweeps: iters, seed, ..Default::default() };
    let res = als_search(&g, steps, &opts)?;
    let mut r = String::new();
    writeln!(r, "steps: {steps}")?;
    writeln!(r, "restarts: {restarts}")?;
    writeln!(r, "max_sweeps: {iters}")?;
    writeln!(r, "seed: {seed}")?;
    writeln!(r, "sweeps_run: {}", res.iterations)?;
    writeln!(r, "best_residual: {:.3e}", res.best_residual)?;
    writeln!(r, "success_tol: {:e}", opts.success_tol)?;
    match res.witness {
        Some(w) => {
            writeln!(r, "witness: found (restart {})", res.best_restart)?;
            if let Some(path) = out {
                fs::write(path, w.to_json()).with_context(|| format!("writing {}", path.display()))?;
                writeln!(r, "written: {}", path.display())?;
            }
            Ok(Outcome::ok(r))
        }
        None => {
            writeln!(r, "witness: none")?;
            Ok(Outcome::negative(r))
        }
    }
}

pub fn bounds(arg: &GraphArg, search: bool, restarts: usize, iters: usize, seed: u64) -> Result<Outcome> {
    let g = load_graph(arg)?;
    let opts = BoundsOptions {
        search: search.then(|| AlsOptions { restarts, sweeps: iters, seed, ..Default::default() }),
        ..Default::default()
    };
    let b = consensus_number_bounds(&g, &opts);
    let mut r = String::new();
    let reason = match b.lower_reason {
        LowerReason::Diameter => "diameter",
        LowerReason::TwoStepCertificate => "two-step infeasibility certificate",
    };
    writeln!(r, "diameter: {}", g.diameter())?;
    writeln!(r, "radius: {}", g.metrics().radius)?;
    writeln!(r, "lower: {} ({reason})", b.lower)?;
    writeln!(r, "upper: {} ({})", b.upper, b.witnesses[0].schedule.construction)?;
    for w in &b.witnesses {
        writeln!(
            r,
            "witness: {} steps={} residual={:.3e}",
            w.schedule.construction,
            w.schedule.steps(),
            w.verification.residual
        )?;
    }
    writeln!(r, "fallback bound 2R: {}", 2 * g.metrics().radius)?;
    if b.is_exact() {
        writeln!(r, "consensus number = {} (certified lower = upper)", b.lower)?;
    } else {
        writeln!(r, "consensus number in [{}, {}]", b.lower, b.upper)?;
    }
    Ok(Outcome::ok(r))
}
