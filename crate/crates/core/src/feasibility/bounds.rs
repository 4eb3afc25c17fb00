//! Lower and upper bounds on the consensus number: the least number of
//! compliant linear steps whose product is the averaging matrix.

use serde::Serialize;

use super::als::{als_search, AlsOptions};
use super::certificate::{certify_two_step_infeasible, InfeasibilityCertificate, TwoStepVerdict};
use crate::graph::Graph;
use crate::schedule::Schedule;
use crate::synthesis::{candidates, verify_schedule, Verification};

/// Tolerance every upper-bound witness must meet.
pub const WITNESS_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LowerReason {
    Diameter,
    TwoStepCertificate,
}

#[derive(Clone, Debug)]
pub struct BoundsOptions {
    /// Numeric search for lengths between the bounds; `None` skips it.
    pub search: Option<AlsOptions>,
    /// Skip the search above this many nodes.
    pub search_max_n: usize,
}

impl Default for BoundsOptions {
    fn default() -> Self {
        Self { search: Some(AlsOptions { restarts: 8, sweeps: 300, ..Default::default() }), search_max_n: 30 }
    }
}

#[derive(Clone, Debug)]
pub struct Witness {
    pub schedule: Schedule,
    pub verification: Verification,
}

#[derive(Clone, Debug)]
pub struct ConsensusBounds {
    pub lower: usize,
    pub lower_reason: LowerReason,
    pub upper: usize,
    /// Verified schedules, shortest first; `witnesses[0]` attains `upper`.
    pub witnesses: Vec<Witness>,
    pub certificate: Option<InfeasibilityCertificate>,
}

impl ConsensusBounds {
    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }
}

pub fn consensus_number_bounds(g: &Graph, opts: &BoundsOptions) -> ConsensusBounds {
    let d = g.diameter();
    let (lower, lower_reason, certificate) = match certify_two_step_infeasible(g) {
        TwoStepVerdict::Certified(cert) if d == 2 => (3, LowerReason::TwoStepCertificate, Some(*cert)),
        _ => (d, LowerReason::Diameter, None),
    };

    let mut witnesses: Vec<Witness> = candidates(g)
        .into_iter()
        .filter(|(_, v)| v.residual <= WITNESS_TOL)
        .map(|(schedule, verification)| Witness { schedule, verification })
        .collect();
    witnesses.sort_by_key(|w| w.schedule.steps());
    let mut upper = witnesses[0].schedule.steps();

    if let Some(search) = &opts.search {
        if g.n() <= opts.search_max_n {
            let found = (lower..upper).find_map(|t| {
                let schedule = als_search(g, t, search).ok()?.witness?;
                let verification = verify_schedule(&schedule, g, WITNESS_TOL).expect("dimensions match");
                verification.passed.then_some(Witness { schedule, verification })
            });
            if let Some(w) = found {
                upper = w.schedule.steps();
                witnesses.insert(0, w);
            }
        }
    }

    ConsensusBounds { lower, lower_reason, upper, witnesses, certificate }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::schedule::Construction;

    fn no_search() -> BoundsOptions {
        BoundsOptions { search: None, ..Default::default() }
    }

    #[test]
    fn counterexample_is_exactly_three() {
        let b = consensus_number_bounds(&families::counterexample(), &no_search());
        assert_eq!((b.lower, b.upper), (3, 3));
        assert_eq!(b.lower_reason, LowerReason::TwoStepCertificate);
        assert_eq!(b.witnesses[0].schedule.construction, Construction::LaplacianShift);
    }

    #[test]
    fn pappus_and_trees() {
        let b = consensus_number_bounds(&families::pappus(), &no_search());
        assert_eq!((b.lower, b.upper), (4, 4));
        let b = consensus_number_bounds(&families::star(6), &no_search());
        assert_eq!((b.lower, b.upper), (2, 2));
    }

    #[test]
    fn search_closes_gap_on_cycle6() {
        // C6 is distance-regular so the spectral bound is already tight; the search never runs
        let b = consensus_number_bounds(&families::cycle(6), &BoundsOptions::default());
        assert!(b.is_exact());
        assert_eq!(b.upper, 3);
    }

    #[test]
    fn every_witness_verifies() {
        let g = families::complete_bipartite(2, 3);
        let b = consensus_number_bounds(&g, &BoundsOptions::default());
        assert!(b.lower <= b.upper);
        for w in &b.witnesses {
            assert!(w.verification.passed && w.verification.residual <= WITNESS_TOL);
        }
    }
}
