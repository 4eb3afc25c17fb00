//! Two-step infeasibility certificates, numeric schedule search and
//! consensus-number bounds.

pub mod als;
pub mod bounds;
pub mod certificate;
pub mod check;

pub use als::{als_restart, als_search, AlsOptions, RestartOutcome, SearchResult};
pub use bounds::{consensus_number_bounds, BoundsOptions, ConsensusBounds, LowerReason, Witness, WITNESS_TOL};
pub use certificate::{
    certify_two_step_infeasible, contradicting_pairs, forced_triples, Contradiction, Equality, ForcedTriple,
    InfeasibilityCertificate, Term, TwoStepVerdict, Var,
};
pub use check::check_certificate;
