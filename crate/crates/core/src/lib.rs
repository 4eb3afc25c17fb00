//! Finite-time average consensus on fixed undirected graphs.
//!
//! Given a connected graph, the crate builds sequences of compliant weight
//! matrices (off-diagonal support restricted to edges) whose product is the
//! exact averaging matrix `(1/n)·11ᵀ`, verifies and simulates them, certifies
//! when two steps cannot suffice, and brackets the minimum schedule length.
//!
//! - [`graph`]: edge-list parsing, distances, distance-regularity, BFS trees
//! - [`spectra`]: Jacobi eigensolver, eigenvalue clustering, structural checks
//! - [`synthesis`]: spectral schedules from one well-conditioned matrix
//! - [`tree`]: gather-and-distribute on trees and BFS spanning trees
//! - [`feasibility`]: infeasibility certificates, numeric search, bounds
//! - [`simulator`]: lockstep replay and CSV export

pub mod error;
pub mod families;
pub mod feasibility;
pub mod graph;
pub mod matrix;
pub mod schedule;
pub mod simulator;
pub mod spectra;
pub mod synthesis;
pub mod tree;

pub use error::{Error, Result};
pub use graph::{Graph, IntersectionArray, Metrics};
pub use matrix::Matrix;
pub use schedule::{Construction, Schedule, SpectralMeta};
