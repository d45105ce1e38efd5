use num_traits::{One, Signed, Zero};

use super::{IntervalSet, SpaceError};
use crate::scalar::{rat, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepNorm {
    /// L∞ norm.
    EssSup,
    /// L1 norm.
    L1,
}

/// Piecewise constant function on a rational partition of [0,1].
///
/// Adjacent pieces with equal values are merged on construction, so two step
/// functions are equal a.e. iff they are structurally equal. Values at the
/// breakpoints themselves are never consulted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepFunction {
    breakpoints: Vec<Scalar>,
    values: Vec<Scalar>,
}

pub(crate) fn valid_partition(points: &[Scalar]) -> bool {
    points.len() >= 2
        && points[0].is_zero()
        && points[points.len() - 1].is_one()
        && points.windows(2).all(|w| w[0] < w[1])
}

/// Sorted union of two partitions of [0,1].
pub fn merge_points(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x == y => {
                i += 1;
                j += 1;
                x
            }
            (Some(x), Some(y)) if x < y => {
                i += 1;
                x
            }
            (Some(_), Some(y)) => {
                j += 1;
                y
            }
            (Some(x), None) => {
                i += 1;
                x
            }
            (None, Some(y)) => {
                j += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        out.push(next.clone());
    }
    out
}

impl StepFunction {
    pub fn new(breakpoints: Vec<Scalar>, values: Vec<Scalar>) -> Result<Self, SpaceError> {
        if !valid_partition(&breakpoints) {
            return Err(SpaceError::BadPartition);
        }
        if values.len() + 1 != breakpoints.len() {
            return Err(SpaceError::LengthMismatch {
                expected: breakpoints.len() - 1,
                got: values.len(),
            });
        }
        Ok(Self::canonical(breakpoints, values))
    }

    fn canonical(breakpoints: Vec<Scalar>, values: Vec<Scalar>) -> Self {
        let mut bp = vec![breakpoints[0].clone()];
        let mut vals: Vec<Scalar> = Vec::with_capacity(values.len());
        for (i, v) in values.into_iter().enumerate() {
            if vals.last() == Some(&v) {
                *bp.last_mut().unwrap() = breakpoints[i + 1].clone();
            } else {
                vals.push(v);
                bp.push(breakpoints[i + 1].clone());
            }
        }
        Self {
            breakpoints: bp,
            values: vals,
        }
    }

    pub fn constant(c: Scalar) -> Self {
        Self {
            breakpoints: vec![Scalar::zero(), Scalar::one()],
            values: vec![c],
        }
    }

    pub fn zero() -> Self {
        Self::constant(Scalar::zero())
    }

    /// `value` on the (closed) intervals of `set`, zero elsewhere.
    pub fn indicator(set: &IntervalSet, value: &Scalar) -> Self {
        let mut bp = vec![Scalar::zero()];
        let mut vals = Vec::new();
        for (a, b) in set.intervals() {
            if a == b {
                continue;
            }
            if a > bp.last().unwrap() {
                vals.push(Scalar::zero());
                bp.push(a.clone());
            }
            vals.push(value.clone());
            bp.push(b.clone());
        }
        if !bp.last().unwrap().is_one() {
            vals.push(Scalar::zero());
            bp.push(Scalar::one());
        }
        if vals.is_empty() {
            return Self::zero();
        }
        Self::canonical(bp, vals)
    }

    pub fn breakpoints(&self) -> &[Scalar] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    /// `(left, right, value)` for each piece.
    pub fn pieces(&self) -> impl Iterator<Item = (&Scalar, &Scalar, &Scalar)> + '_ {
        self.breakpoints
            .windows(2)
            .zip(&self.values)
            .map(|(w, v)| (&w[0], &w[1], v))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn norm(&self, which: StepNorm) -> Scalar {
        match which {
            StepNorm::EssSup => self
                .values
                .iter()
                .map(|v| v.abs())
                .max()
                .unwrap_or_else(Scalar::zero),
            StepNorm::L1 => self.pieces().map(|(a, b, v)| v.abs() * (b - a)).sum(),
        }
    }

    /// Value on the piece whose interior contains `t`; at a breakpoint the
    /// piece to the right is used (the last piece at `t = 1`).
    pub fn value_at(&self, t: &Scalar) -> Scalar {
        let idx = self.breakpoints[1..]
            .iter()
            .position(|b| t < b)
            .unwrap_or(self.values.len() - 1);
        self.values[idx].clone()
    }

    /// Values on each piece of `partition`, which must refine this function's
    /// partition.
    pub fn values_on(&self, partition: &[Scalar]) -> Vec<Scalar> {
        let mut out = Vec::with_capacity(partition.len().saturating_sub(1));
        let mut k = 0;
        for w in partition.windows(2) {
            while self.breakpoints[k + 1] <= w[0] {
                k += 1;
            }
            out.push(self.values[k].clone());
        }
        out
    }

    /// Pointwise `op(self, other)` on the common refinement.
    pub fn combine(&self, other: &StepFunction, op: impl Fn(&Scalar, &Scalar) -> Scalar) -> Self {
        let bp = merge_points(&self.breakpoints, &other.breakpoints);
        let a = self.values_on(&bp);
        let b = other.values_on(&bp);
        let vals = a.iter().zip(&b).map(|(x, y)| op(x, y)).collect();
        Self::canonical(bp, vals)
    }

    pub fn map(&self, op: impl Fn(&Scalar) -> Scalar) -> Self {
        Self::canonical(
            self.breakpoints.clone(),
            self.values.iter().map(op).collect(),
        )
    }

    /// `self + lambda * other`.
    pub fn add_scaled(&self, other: &StepFunction, lambda: &Scalar) -> Self {
        self.combine(other, |x, y| x + lambda * y)
    }

    pub fn scale(&self, lambda: &Scalar) -> Self {
        self.map(|v| lambda * v)
    }

    /// ∫₀¹ self · other.
    pub fn pair(&self, other: &StepFunction) -> Scalar {
        let bp = merge_points(&self.breakpoints, &other.breakpoints);
        let a = self.values_on(&bp);
        let b = other.values_on(&bp);
        bp.windows(2)
            .zip(a.iter().zip(&b))
            .map(|(w, (x, y))| x * y * (&w[1] - &w[0]))
            .sum()
    }

    /// ∫ over `set` of the function.
    pub fn integral_over(&self, set: &IntervalSet) -> Scalar {
        self.pair(&StepFunction::indicator(set, &Scalar::one()))
    }

    /// Union of the closed pieces whose value satisfies `pred`.
    pub fn level_set(&self, pred: impl Fn(&Scalar) -> bool) -> IntervalSet {
        IntervalSet::new(
            self.pieces()
                .filter(|(_, _, v)| pred(v))
                .map(|(a, b, _)| (a.clone(), b.clone())),
        )
        .expect("pieces lie in [0,1]")
    }

    /// Midpoint of the piece `i`; a point where the function surely takes
    /// `values()[i]`.
    pub fn midpoint(&self, i: usize) -> Scalar {
        (&self.breakpoints[i] + &self.breakpoints[i + 1]) * rat(1, 2)
    }
}

pub fn step_norm(f: &StepFunction, which: StepNorm) -> Scalar {
    f.norm(which)
}

pub fn pair_step(f: &StepFunction, phi: &StepFunction) -> Scalar {
    f.pair(phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn step(bp: &[Scalar], v: &[Scalar]) -> StepFunction {
        StepFunction::new(bp.to_vec(), v.to_vec()).unwrap()
    }

    #[test]
    fn norm_examples() {
        let f = step(&[int(0), rat(1, 2), int(1)], &[int(1), int(-1)]);
        assert_eq!(f.norm(StepNorm::L1), int(1));
        assert_eq!(f.norm(StepNorm::EssSup), int(1));
        let g = step(&[int(0), rat(1, 4), int(1)], &[int(2), int(0)]);
        assert_eq!(g.norm(StepNorm::L1), rat(1, 2));
    }

    #[test]
    fn pairing_examples() {
        let one = StepFunction::constant(int(1));
        assert_eq!(one.pair(&one), int(1));
        let f = step(&[int(0), rat(1, 2), int(1)], &[int(1), int(-1)]);
        let phi = step(&[int(0), rat(1, 2), int(1)], &[int(2), int(0)]);
        assert_eq!(pair_step(&f, &phi), int(1));
        assert_eq!(pair_step(&f, &StepFunction::zero()), int(0));
    }

    #[test]
    fn canonical_form_merges_equal_pieces() {
        let f = step(&[int(0), rat(1, 3), int(1)], &[int(5), int(5)]);
        assert_eq!(f, StepFunction::constant(int(5)));
        let a = step(&[int(0), rat(1, 2), int(1)], &[int(1), int(2)]);
        let b = a.add_scaled(&a, &int(-1));
        assert_eq!(b, StepFunction::zero());
    }

    #[test]
    fn validation() {
        assert_eq!(
            StepFunction::new(vec![int(0), int(1)], vec![]),
            Err(SpaceError::LengthMismatch {
                expected: 1,
                got: 0
            })
        );
        assert_eq!(
            StepFunction::new(vec![rat(1, 2), int(1)], vec![int(1)]),
            Err(SpaceError::BadPartition)
        );
    }

    #[test]
    fn indicator_and_level_sets() {
        let s = IntervalSet::new([(rat(1, 4), rat(1, 2)), (rat(3, 4), int(1))]).unwrap();
        let f = StepFunction::indicator(&s, &int(3));
        assert_eq!(f.values(), &[int(0), int(3), int(0), int(3)]);
        assert_eq!(f.level_set(|v| v > &int(0)), s);
        assert_eq!(f.integral_over(&s), rat(3, 2));
        assert_eq!(f.value_at(&rat(1, 4)), int(3));
        assert_eq!(f.value_at(&int(1)), int(3));
    }
}
