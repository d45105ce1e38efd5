//! Exact finite models of c0 / l1, L1[0,1] / L∞[0,1], C[0,1] and M[0,1].
//!
//! * [`SparseSeq`]: finitely supported sequences (c0 with the sup norm,
//!   l1 with the sum norm).
//! * [`StepFunction`]: piecewise constant functions on a rational partition
//!   of [0,1] (L1 and L∞ norms).
//! * [`PiecewiseAffine`]: piecewise affine, possibly discontinuous L∞
//!   elements. Needed wherever an essential supremum is approached but not
//!   attained on a set of positive measure.
//! * [`PLFunction`]: continuous piecewise linear functions (C[0,1]).
//! * [`Measure`]: finitely many atoms plus a step density (M[0,1] with the
//!   total variation norm).
//! * [`IntervalSet`]: finite unions of closed intervals.
//!
//! All values are immutable once built and every operation is exact.

mod affine;
mod intervals;
pub mod json;
mod measure;
mod pl;
mod seq;
mod step;

pub use affine::{pair_affine_step, PiecewiseAffine};
pub use intervals::IntervalSet;
pub use measure::{Atom, Measure};
pub use pl::PLFunction;
pub use seq::{seq_norm, SeqNorm, SparseSeq};
pub use step::{merge_points, pair_step, step_norm, StepFunction, StepNorm};

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpaceError {
    #[error("sequence indices start at 1, got {0}")]
    ZeroIndex(usize),
    #[error("breakpoints must start at 0, end at 1 and strictly increase")]
    BadPartition,
    #[error("expected {expected} piece values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("PL functions need at least two nodes")]
    TooFewNodes,
    #[error("point {0} lies outside [0,1]")]
    OutOfUnitInterval(Scalar),
    #[error("duplicate atom location {0}")]
    DuplicateAtom(Scalar),
    #[error("interval [{}, {}] is reversed", .0.0, .0.1)]
    ReversedInterval(Box<(Scalar, Scalar)>),
}

/// Exact ∫ f dμ for a continuous piecewise linear `f`.
pub fn pair_measure(mu: &Measure, f: &PLFunction) -> Scalar {
    mu.pair(f)
}

/// Total variation norm ‖μ‖ = |μ|([0,1]).
pub fn tv_norm(mu: &Measure) -> Scalar {
    mu.tv_norm()
}

/// Lebesgue–Hewitt–Stromberg split into the continuous (density) part and
/// the purely atomic part.
pub fn decompose_measure(mu: &Measure) -> (Measure, Measure) {
    mu.decompose()
}

pub fn pl_sup_norm(f: &PLFunction) -> Scalar {
    f.sup_norm()
}

pub(crate) fn check_unit(t: &Scalar) -> Result<(), SpaceError> {
    use num_traits::{One, Zero};
    if *t < Scalar::zero() || *t > Scalar::one() {
        Err(SpaceError::OutOfUnitInterval(t.clone()))
    } else {
        Ok(())
    }
}
