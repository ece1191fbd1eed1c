//! Empirical checks of the inequalities behind the concentration proof.
//!
//! Everything here is a pure function of its inputs and seed, meant for small
//! instances or Monte-Carlo replicas.

mod kl;
mod lemmas;
mod net;
mod tuples;

pub use kl::{kl_bernoulli, KlRecord};
pub use lemmas::{
    bounded_degree_check, discrepancy_check, dyadic_profile, DegreeCheck, DiscrepancyReport, DyadicCell,
    DyadicProfile,
};
pub use net::{lattice_net, net_supremum_check, LatticeNet, NetSupremum, NET_MAX_DIM};
pub use tuples::{light_contribution_check, split_tuples, LightContribution, TupleSplit};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Constants of the degree and discrepancy lemmas plus the net resolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LemmaConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub delta: f64,
}

impl Default for LemmaConstants {
    fn default() -> Self {
        Self { c1: 3.0, c2: 20.0, c3: 20.0, delta: 0.5 }
    }
}

impl LemmaConstants {
    pub fn validate(&self) -> Result<()> {
        if !(self.c1 > 1.0 && self.c2 > 1.0 && self.c3 > 1.0) {
            return Err(Error::OutOfRange("lemma constants must exceed 1".into()));
        }
        check_delta(self.delta)
    }
}

pub(crate) fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::OutOfRange(format!("delta = {delta} not in (0, 1)")));
    }
    Ok(())
}
