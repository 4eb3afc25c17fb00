//! Lockstep replay of a schedule on a network of scalar nodes.
//!
//! Each node owns one row of every factor and, in each round, reads only its
//! own state and those of its neighbors. All reads of round `t` happen before
//! any write of round `t + 1`.

use std::io::Write;

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::schedule::Schedule;
use crate::spectra::compliance_violation;

/// Name of the generator behind [`random_initial`], recorded in CSV exports.
pub const RNG_NAME: &str = "ChaCha8Rng(seed_from_u64)";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StateVector {
    pub values: Vec<f64>,
    pub step: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    /// `states[0]` is the initial state.
    pub states: Vec<StateVector>,
    pub initial_mean: f64,
    /// `max_i |x_i - initial_mean|` on the last state.
    pub final_spread: f64,
}

impl Trajectory {
    pub fn last(&self) -> &StateVector {
        self.states.last().expect("trajectory always holds the initial state")
    }

    pub fn spread_at(&self, step: usize) -> f64 {
        spread(&self.states[step].values, self.initial_mean)
    }
}

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

fn spread(x: &[f64], center: f64) -> f64 {
    x.iter().fold(0.0f64, |m, v| m.max((v - center).abs()))
}

/// The weights one node holds for one round: `(j, a_ij)` over its closed
/// neighborhood, ascending in `j`.
fn local_rows(g: &Graph, s: &Schedule) -> Vec<Vec<Vec<(usize, f64)>>> {
    s.factors
        .iter()
        .map(|f| {
            (0..g.n())
                .map(|i| {
                    let mut hood: Vec<usize> = g.neighbors(i).to_vec();
                    let pos = hood.partition_point(|&j| j < i);
                    hood.insert(pos, i);
                    hood.into_iter().map(|j| (j, f[(i, j)])).filter(|&(_, w)| w != 0.0).collect()
                })
                .collect()
        })
        .collect()
}

pub fn run_schedule(g: &Graph, s: &Schedule, x0: &StateVector) -> Result<Trajectory> {
    let n = g.n();
    if s.n != n {
        return Err(Error::Dimension { expected: n, got: s.n });
    }
    if x0.values.len() != n {
        return Err(Error::Dimension { expected: n, got: x0.values.len() });
    }
    for f in &s.factors {
        if let Some((i, j)) = compliance_violation(f, g)? {
            return Err(Error::NonCompliant { i, j });
        }
    }
    let rows = local_rows(g, s);
    let initial_mean = mean(&x0.values);
    let mut states = vec![StateVector { values: x0.values.clone(), step: 0 }];
    for (t, round) in rows.iter().enumerate() {
        let prev = &states[t].values;
        let next: Vec<f64> =
            round.iter().map(|row| row.iter().fold(0.0, |acc, &(j, w)| acc + w * prev[j])).collect();
        states.push(StateVector { values: next, step: t + 1 });
    }
    let final_spread = spread(&states.last().unwrap().values, initial_mean);
    Ok(Trajectory { states, initial_mean, final_spread })
}

/// `n` values drawn uniformly from `[lo, hi)`, reproducible from `seed`.
pub fn random_initial(n: usize, lo: f64, hi: f64, seed: u64) -> Result<StateVector> {
    if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
        return Err(Error::InvalidArgument(format!("need lo < hi, got [{lo}, {hi})")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = Uniform::new(lo, hi);
    Ok(StateVector { values: (0..n).map(|_| dist.sample(&mut rng)).collect(), step: 0 })
}

/// Writes `step,node,value` rows followed by `#` comment lines: any caller
/// notes, then the initial mean and final spread.
pub fn export_trajectory<W: Write>(tr: &Trajectory, mut out: W, notes: &[String]) -> Result<()> {
    writeln!(out, "step,node,value")?;
    for s in &tr.states {
        for (i, v) in s.values.iter().enumerate() {
            writeln!(out, "{},{},{:.17e}", s.step, i, v)?;
        }
    }
    for note in notes {
        writeln!(out, "# {note}")?;
    }
    writeln!(out, "# initial_mean={:.17e} final_spread={:.6e}", tr.initial_mean, tr.final_spread)?;
    out.flush()?;
    Ok(())
}
