//! Consensus schedules and their JSON file format.
//!
//! ```text
//! {"n": 3, "steps": 2, "construction": "path",
//!  "matrices": [[a11, a12, ..., ann], ...],
//!  "meta": {"k": 2.0, "lambdas": [-1.0, 1.0]}}
//! ```
//!
//! Each matrix is a flat row-major array; `matrices[0]` is applied first.
//! Numbers are written with 17 significant digits so files round-trip exactly.

use std::fmt;
use std::str::FromStr;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::matrix::{chain_product, Matrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Construction {
    Adjacency,
    LaplacianShift,
    Path,
    Tree,
    BfsTree,
    Search,
    Other(String),
}

impl Construction {
    pub fn as_str(&self) -> &str {
        match self {
            Construction::Adjacency => "adjacency",
            Construction::LaplacianShift => "laplacian-shift",
            Construction::Path => "path",
            Construction::Tree => "tree",
            Construction::BfsTree => "bfs-tree",
            Construction::Search => "search",
            Construction::Other(s) => s,
        }
    }

    /// Spectral constructions have commuting factors with unit row sums.
    pub fn is_spectral(&self) -> bool {
        matches!(self, Construction::Adjacency | Construction::LaplacianShift | Construction::Path)
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Construction {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s {
            "adjacency" => Construction::Adjacency,
            "laplacian-shift" => Construction::LaplacianShift,
            "path" => Construction::Path,
            "tree" => Construction::Tree,
            "bfs-tree" => Construction::BfsTree,
            "search" => Construction::Search,
            other => Construction::Other(other.to_string()),
        })
    }
}

/// Eigenvalue data behind a spectral schedule.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralMeta {
    /// Eigenvalue of the all-ones eigenvector.
    pub k: f64,
    /// Remaining distinct eigenvalues, one per factor, in application order.
    pub lambdas: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Schedule {
    pub n: usize,
    /// `factors[0]` is applied first.
    pub factors: Vec<Matrix>,
    pub construction: Construction,
    pub meta: Option<SpectralMeta>,
}

impl Schedule {
    pub fn new(n: usize, factors: Vec<Matrix>, construction: Construction) -> Self {
        Self { n, factors, construction, meta: None }
    }

    pub fn steps(&self) -> usize {
        self.factors.len()
    }

    /// `A^(t) ⋯ A^(1)`.
    pub fn product(&self) -> Matrix {
        chain_product(self.n, &self.factors)
    }

    pub fn to_json(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("{{\n  \"n\": {},\n  \"steps\": {},\n", self.n, self.steps()));
        s.push_str(&format!("  \"construction\": {},\n", serde_json::to_string(self.construction.as_str()).unwrap()));
        s.push_str("  \"matrices\": [");
        for (t, m) in self.factors.iter().enumerate() {
            s.push_str(if t == 0 { "\n    [" } else { ",\n    [" });
            let entries: Vec<String> = m.as_slice().iter().map(|&v| fmt_number(v)).collect();
            s.push_str(&entries.join(", "));
            s.push(']');
        }
        s.push_str(if self.factors.is_empty() { "]" } else { "\n  ]" });
        if let Some(meta) = &self.meta {
            let lambdas: Vec<String> = meta.lambdas.iter().map(|&v| fmt_number(v)).collect();
            s.push_str(&format!(
                ",\n  \"meta\": {{\"k\": {}, \"lambdas\": [{}]}}",
                fmt_number(meta.k),
                lambdas.join(", ")
            ));
        }
        s.push_str("\n}\n");
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawSchedule = serde_json::from_str(text).map_err(|e| Error::ScheduleFormat(e.to_string()))?;
        let n = raw.n;
        if n == 0 {
            return Err(Error::ScheduleFormat("n must be positive".into()));
        }
        if raw.steps != raw.matrices.len() {
            return Err(Error::ScheduleFormat(format!(
                "steps = {} but {} matrices given",
                raw.steps,
                raw.matrices.len()
            )));
        }
        let factors = raw
            .matrices
            .into_iter()
            .enumerate()
            .map(|(t, entries)| {
                if entries.len() != n * n {
                    return Err(Error::ScheduleFormat(format!(
                        "matrix {t} has {} entries, expected {}",
                        entries.len(),
                        n * n
                    )));
                }
                Ok(Matrix::from_row_major(n, n, entries))
            })
            .collect::<Result<Vec<_>>>()?;
        let construction = raw.construction.as_deref().unwrap_or("search").parse().unwrap();
        let meta = raw.meta.map(|m| SpectralMeta { k: m.k, lambdas: m.lambdas });
        Ok(Self { n, factors, construction, meta })
    }
}

fn fmt_number(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{v:.16e}")
    }
}

#[derive(Deserialize)]
struct RawSchedule {
    n: usize,
    steps: usize,
    matrices: Vec<Vec<f64>>,
    construction: Option<String>,
    meta: Option<RawMeta>,
}

#[derive(Deserialize)]
struct RawMeta {
    k: f64,
    lambdas: Vec<f64>,
}
