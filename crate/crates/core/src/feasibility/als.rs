//! Numeric search for `t`-step schedules by block-coordinate descent.
//!
//! With every factor but one fixed, `F = ‖A^(t) ⋯ A^(1) - (1/n)·11ᵀ‖²_F` is a
//! quadratic in the free entries (diagonal plus edges) of the remaining
//! factor. Each block update minimises that quadratic plus a small proximal
//! term `ρ‖X - X_old‖²`, which keeps the normal equations positive definite
//! and makes `F` non-increasing.

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matrix::{chain_product, Matrix};
use crate::schedule::{Construction, Schedule};
use crate::synthesis::{verify_schedule, Verification};

#[derive(Clone, Debug, PartialEq)]
pub struct AlsOptions {
    pub restarts: usize,
    /// Maximum sweeps (one update of every factor) per restart.
    pub sweeps: usize,
    pub seed: u64,
    /// Frobenius residual at or below which a witness is reported.
    pub success_tol: f64,
    /// Proximal damping, relative to the largest diagonal entry of the normal matrix.
    pub damping: f64,
}

impl Default for AlsOptions {
    fn default() -> Self {
        Self { restarts: 32, sweeps: 500, seed: 0, success_tol: 1e-8, damping: 1e-12 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchResult {
    pub t: usize,
    /// Smallest Frobenius residual over all restarts.
    pub best_residual: f64,
    #[serde(skip)]
    pub witness: Option<Schedule>,
    pub verification: Option<Verification>,
    pub restarts: usize,
    /// Total sweeps over all restarts.
    pub iterations: usize,
    pub seed: u64,
    /// Restart that produced `best_residual`.
    pub best_restart: usize,
}

/// One restart's final state.
#[derive(Clone, Debug)]
pub struct RestartOutcome {
    pub factors: Vec<Matrix>,
    /// Frobenius residual.
    pub residual: f64,
    pub sweeps: usize,
    /// Squared residual after every block update, when requested.
    pub trace: Vec<f64>,
}

/// Free positions of a compliant matrix: diagonal plus both orientations of each edge.
fn pattern(g: &Graph) -> Vec<(usize, usize)> {
    let mut p = Vec::new();
    for i in 0..g.n() {
        let mut cols: Vec<usize> = g.neighbors(i).to_vec();
        cols.push(i);
        cols.sort_unstable();
        p.extend(cols.into_iter().map(|j| (i, j)));
    }
    p
}

fn squared_residual(n: usize, factors: &[Matrix]) -> f64 {
    let target = 1.0 / n as f64;
    chain_product(n, factors).as_slice().iter().map(|v| (v - target) * (v - target)).sum()
}

/// Runs one restart. `stream` selects an independent random stream for the initial point.
pub fn als_restart(g: &Graph, t: usize, opts: &AlsOptions, stream: u64, record_trace: bool) -> RestartOutcome {
    let n = g.n();
    let pat = pattern(g);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(stream);
    let unit = Uniform::new_inclusive(-1.0, 1.0);
    let mut factors: Vec<Matrix> = (0..t)
        .map(|_| {
            let mut m = Matrix::zeros(n, n);
            for &(i, j) in &pat {
                m[(i, j)] = unit.sample(&mut rng);
            }
            m
        })
        .collect();

    let goal = (opts.success_tol * 1e-2).powi(2);
    let mut f = squared_residual(n, &factors);
    let mut trace = Vec::new();
    if record_trace {
        trace.push(f);
    }
    let mut history: Vec<f64> = vec![f];
    let mut sweeps = 0;
    while sweeps < opts.sweeps && f > goal {
        for k in 0..t {
            update_block(n, &pat, &mut factors, k, opts.damping);
            f = squared_residual(n, &factors);
            if record_trace {
                trace.push(f);
            }
        }
        rebalance(&mut factors);
        sweeps += 1;
        history.push(f);
        // stop on stagnation: under 1e-9 relative progress across 25 sweeps
        if history.len() > 25 {
            let old = history[history.len() - 26];
            if old - f <= 1e-9 * old {
                break;
            }
        }
    }
    RestartOutcome { residual: f.sqrt(), factors, sweeps, trace }
}

/// Minimises over factor `k` with the others fixed.
fn update_block(n: usize, pat: &[(usize, usize)], factors: &mut [Matrix], k: usize, damping: f64) {
    // product = L · X · R with R = A^(k-1)⋯A^(1) and L = A^(t)⋯A^(k+1)
    let right = chain_product(n, &factors[..k]);
    let left = chain_product(n, &factors[k + 1..]);
    let p = left.transpose().matmul(&left);
    let q = right.matmul(&right.transpose());
    // Lᵀ (1/n) 11ᵀ Rᵀ = (1/n) (Lᵀ1)(R1)ᵀ
    let u = left.col_sums();
    let w = right.row_sums();

    let m = pat.len();
    let mut h = vec![0.0; m * m];
    let mut rhs = vec![0.0; m];
    for (a, &(i, j)) in pat.iter().enumerate() {
        for (b, &(r, c)) in pat.iter().enumerate() {
            h[a * m + b] = p[(i, r)] * q[(c, j)];
        }
        rhs[a] = u[i] * w[j] / n as f64;
    }
    let diag_max = (0..m).map(|a| h[a * m + a]).fold(1.0f64, f64::max);
    let mut rho = damping * diag_max;
    let current: Vec<f64> = pat.iter().map(|&(i, j)| factors[k][(i, j)]).collect();
    loop {
        let mut sys = h.clone();
        let mut b = rhs.clone();
        for a in 0..m {
            sys[a * m + a] += rho;
            b[a] += rho * current[a];
        }
        if let Some(x) = cholesky_solve(&mut sys, &mut b, m) {
            for (&(i, j), v) in pat.iter().zip(x) {
                factors[k][(i, j)] = v;
            }
            return;
        }
        rho = (rho * 100.0).max(1e-14);
        if rho > diag_max {
            return;
        }
    }
}

/// Rescales factors to equal Frobenius norm without changing their product.
fn rebalance(factors: &mut [Matrix]) {
    let norms: Vec<f64> = factors.iter().map(Matrix::frobenius).collect();
    if norms.iter().any(|&v| v == 0.0 || !v.is_finite()) {
        return;
    }
    let geo = (norms.iter().map(|v| v.ln()).sum::<f64>() / norms.len() as f64).exp();
    for (f, nv) in factors.iter_mut().zip(norms) {
        *f = f.scale(geo / nv);
    }
}

/// Solves `S x = b` for symmetric positive definite `S` (row-major, overwritten).
fn cholesky_solve(s: &mut [f64], b: &mut [f64], m: usize) -> Option<Vec<f64>> {
    for j in 0..m {
        let mut d = s[j * m + j];
        for k in 0..j {
            d -= s[j * m + k] * s[j * m + k];
        }
        if d <= 0.0 || !d.is_finite() {
            return None;
        }
        let d = d.sqrt();
        s[j * m + j] = d;
        for i in j + 1..m {
            let mut v = s[i * m + j];
            for k in 0..j {
                v -= s[i * m + k] * s[j * m + k];
            }
            s[i * m + j] = v / d;
        }
    }
    for i in 0..m {
        let mut v = b[i];
        for k in 0..i {
            v -= s[i * m + k] * b[k];
        }
        b[i] = v / s[i * m + i];
    }
    for i in (0..m).rev() {
        let mut v = b[i];
        for k in i + 1..m {
            v -= s[k * m + i] * b[k];
        }
        b[i] = v / s[i * m + i];
    }
    Some(b.to_vec())
}

/// Multi-restart search for a `t`-step schedule on `g`.
pub fn als_search(g: &Graph, t: usize, opts: &AlsOptions) -> Result<SearchResult> {
    if t == 0 {
        return Err(Error::InvalidArgument("step count must be at least 1".into()));
    }
    if opts.restarts == 0 {
        return Err(Error::InvalidArgument("need at least one restart".into()));
    }
    let run = |r: usize| (r, als_restart(g, t, opts, r as u64, false));
    #[cfg(feature = "parallel")]
    let outcomes: Vec<(usize, RestartOutcome)> = {
        use rayon::prelude::*;
        (0..opts.restarts).into_par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let outcomes: Vec<(usize, RestartOutcome)> = (0..opts.restarts).map(run).collect();

    let iterations = outcomes.iter().map(|(_, o)| o.sweeps).sum();
    let (best_restart, best) = outcomes
        .into_iter()
        .min_by(|(ra, a), (rb, b)| a.residual.total_cmp(&b.residual).then(ra.cmp(rb)))
        .unwrap();

    let mut result = SearchResult {
        t,
        best_residual: best.residual,
        witness: None,
        verification: None,
        restarts: opts.restarts,
        iterations,
        seed: opts.seed,
        best_restart,
    };
    if best.residual <= opts.success_tol {
        let schedule = Schedule::new(g.n(), best.factors, Construction::Search);
        let v = verify_schedule(&schedule, g, opts.success_tol)?;
        if v.passed {
            result.witness = Some(schedule);
            result.verification = Some(v);
        }
    }
    Ok(result)
}
