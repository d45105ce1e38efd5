//! Witnesses for the adjusted Bhatia-Šemrl property and perturbations that
//! destroy it. Every construction verifies its own output exactly and
//! returns the checks as a [`Certificate`](crate::certificate::Certificate).

mod c0;
mod dirac;
mod fat_cantor;
mod l1;
mod measures;
mod perturb;
mod rnp;
mod weakstar;

pub use c0::c0_bsa_witness;
pub use dirac::{dirac_f_alpha, DiracWitness};
pub use fat_cantor::{fat_cantor, fat_cantor_window_check};
pub use l1::{l1_phi_witness, l1_truncate, Truncation};
pub use measures::{
    baseline_mu, measure_nu_atomic, measure_nu_continuous, AtomicConstruction, ContinuousConstruction,
};
pub use perturb::{c01_no_bsa_perturb, Perturbation};
pub use perturb::density_blocks;
pub use rnp::{l1_rnp_counterexample, RnpConstruction, RnpParams};
pub use weakstar::weak_star_approximate;

use thiserror::Error;

use crate::attainment::AttainmentError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstructionError {
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("no admissible parameter found: {0}")]
    NoSolution(String),
    #[error(transparent)]
    Attainment(#[from] AttainmentError),
}

pub(crate) fn precondition(ok: bool, msg: impl FnOnce() -> String) -> Result<(), ConstructionError> {
    if ok {
        Ok(())
    } else {
        Err(ConstructionError::PreconditionFailed(msg()))
    }
}

/// Sample size and seed for the randomized parts of a verification.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub samples: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { samples: 20, seed: 0 }
    }
}

/// Default truncation depth of the infinite series in the measure
/// constructions.
pub const DEFAULT_DEPTH: usize = 4;
