use num_traits::{Signed, Zero};

use super::step::{merge_points, valid_partition};
use super::{IntervalSet, SpaceError, StepFunction};
use crate::scalar::{rat, Scalar};

/// Piecewise affine function on a rational partition of [0,1], possibly
/// discontinuous at the breakpoints. Each piece stores its one-sided limits
/// at the left and right endpoint.
///
/// As an element of L∞ its norm is the largest endpoint limit in absolute
/// value; a non-constant piece reaches that value only at an endpoint, so it
/// is approached but never attained on a set of positive measure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseAffine {
    breakpoints: Vec<Scalar>,
    limits: Vec<(Scalar, Scalar)>,
}

fn interpolate(a: &Scalar, b: &Scalar, l: &Scalar, r: &Scalar, t: &Scalar) -> Scalar {
    l + (r - l) * (t - a) / (b - a)
}

impl PiecewiseAffine {
    pub fn new(breakpoints: Vec<Scalar>, limits: Vec<(Scalar, Scalar)>) -> Result<Self, SpaceError> {
        if !valid_partition(&breakpoints) {
            return Err(SpaceError::BadPartition);
        }
        if limits.len() + 1 != breakpoints.len() {
            return Err(SpaceError::LengthMismatch {
                expected: breakpoints.len() - 1,
                got: limits.len(),
            });
        }
        Ok(Self::canonical(breakpoints, limits))
    }

    /// Merges adjacent pieces that form a single affine piece.
    fn canonical(breakpoints: Vec<Scalar>, limits: Vec<(Scalar, Scalar)>) -> Self {
        let mut bp = vec![breakpoints[0].clone()];
        let mut out: Vec<(Scalar, Scalar)> = Vec::with_capacity(limits.len());
        for (i, (l, r)) in limits.into_iter().enumerate() {
            let a = &breakpoints[i];
            let b = &breakpoints[i + 1];
            if let Some(prev) = out.last_mut() {
                let pa = &bp[bp.len() - 2];
                let slope_prev = (&prev.1 - &prev.0) / (a - pa);
                let slope = (&r - &l) / (b - a);
                if prev.1 == l && slope_prev == slope {
                    prev.1 = r;
                    *bp.last_mut().unwrap() = b.clone();
                    continue;
                }
            }
            out.push((l, r));
            bp.push(b.clone());
        }
        Self {
            breakpoints: bp,
            limits: out,
        }
    }

    pub fn from_step(f: &StepFunction) -> Self {
        Self {
            breakpoints: f.breakpoints().to_vec(),
            limits: f.values().iter().map(|v| (v.clone(), v.clone())).collect(),
        }
    }

    /// The step function with the same values, if every piece is constant.
    pub fn to_step(&self) -> Option<StepFunction> {
        if self.limits.iter().all(|(l, r)| l == r) {
            let vals = self.limits.iter().map(|(l, _)| l.clone()).collect();
            Some(StepFunction::new(self.breakpoints.clone(), vals).expect("valid partition"))
        } else {
            None
        }
    }

    pub fn breakpoints(&self) -> &[Scalar] {
        &self.breakpoints
    }

    pub fn limits(&self) -> &[(Scalar, Scalar)] {
        &self.limits
    }

    pub fn pieces(&self) -> impl Iterator<Item = (&Scalar, &Scalar, &(Scalar, Scalar))> + '_ {
        self.breakpoints
            .windows(2)
            .zip(&self.limits)
            .map(|(w, lr)| (&w[0], &w[1], lr))
    }

    pub fn is_zero(&self) -> bool {
        self.limits.iter().all(|(l, r)| l.is_zero() && r.is_zero())
    }

    pub fn ess_sup(&self) -> Scalar {
        self.limits
            .iter()
            .flat_map(|(l, r)| [l.abs(), r.abs()])
            .max()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn l1_norm(&self) -> Scalar {
        let mut total = Scalar::zero();
        for (a, b, (l, r)) in self.pieces() {
            let len = b - a;
            if l.is_negative() == r.is_negative() || l.is_zero() || r.is_zero() {
                total += (l.abs() + r.abs()) * len * rat(1, 2);
            } else {
                // Sign change inside the piece: two triangles.
                let (la, ra) = (l.abs(), r.abs());
                total += (&la * &la + &ra * &ra) / (&la + &ra) * len * rat(1, 2);
            }
        }
        total
    }

    pub fn value_at(&self, t: &Scalar) -> Scalar {
        let idx = self.breakpoints[1..]
            .iter()
            .position(|b| t < b)
            .unwrap_or(self.limits.len() - 1);
        let (l, r) = &self.limits[idx];
        interpolate(&self.breakpoints[idx], &self.breakpoints[idx + 1], l, r, t)
    }

    /// Endpoint limits on each piece of `partition`, which must refine this
    /// function's partition.
    pub fn limits_on(&self, partition: &[Scalar]) -> Vec<(Scalar, Scalar)> {
        let mut out = Vec::with_capacity(partition.len().saturating_sub(1));
        let mut k = 0;
        for w in partition.windows(2) {
            while self.breakpoints[k + 1] <= w[0] {
                k += 1;
            }
            let (a, b) = (&self.breakpoints[k], &self.breakpoints[k + 1]);
            let (l, r) = &self.limits[k];
            out.push((
                interpolate(a, b, l, r, &w[0]),
                interpolate(a, b, l, r, &w[1]),
            ));
        }
        out
    }

    /// `self + lambda * other`.
    pub fn add_scaled(&self, other: &PiecewiseAffine, lambda: &Scalar) -> Self {
        let bp = merge_points(&self.breakpoints, &other.breakpoints);
        let a = self.limits_on(&bp);
        let b = other.limits_on(&bp);
        let limits = a
            .into_iter()
            .zip(b)
            .map(|((l1, r1), (l2, r2))| (l1 + lambda * l2, r1 + lambda * r2))
            .collect();
        Self::canonical(bp, limits)
    }

    pub fn scale(&self, lambda: &Scalar) -> Self {
        Self::canonical(
            self.breakpoints.clone(),
            self.limits
                .iter()
                .map(|(l, r)| (lambda * l, lambda * r))
                .collect(),
        )
    }

    /// Constant pieces where |value| equals the essential supremum. This is
    /// where an L1 function must live to be normed by `self`.
    pub fn plateau(&self) -> IntervalSet {
        let sup = self.ess_sup();
        IntervalSet::new(
            self.pieces()
                .filter(|(_, _, (l, r))| l == r && l.abs() == sup)
                .map(|(a, b, _)| (a.clone(), b.clone())),
        )
        .expect("pieces lie in [0,1]")
    }

    /// ∫₀¹ self · φ for a step function φ.
    pub fn pair(&self, phi: &StepFunction) -> Scalar {
        let bp = merge_points(&self.breakpoints, phi.breakpoints());
        let lim = self.limits_on(&bp);
        let vals = phi.values_on(&bp);
        bp.windows(2)
            .zip(lim.iter().zip(&vals))
            .map(|(w, ((l, r), v))| (l + r) * v * (&w[1] - &w[0]) * rat(1, 2))
            .sum()
    }
}

impl From<&StepFunction> for PiecewiseAffine {
    fn from(f: &StepFunction) -> Self {
        Self::from_step(f)
    }
}

pub fn pair_affine_step(g: &PiecewiseAffine, phi: &StepFunction) -> Scalar {
    g.pair(phi)
}
