use num_traits::{One, Signed, Zero};

use super::step::{merge_points, valid_partition};
use super::{check_unit, SpaceError};
use crate::scalar::Scalar;

/// Continuous piecewise linear function on [0,1], given by its values at
/// strictly increasing nodes `0 = s₀ < … < s_m = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLFunction {
    nodes: Vec<Scalar>,
    values: Vec<Scalar>,
}

impl PLFunction {
    pub fn new(nodes: Vec<Scalar>, values: Vec<Scalar>) -> Result<Self, SpaceError> {
        if nodes.len() < 2 {
            return Err(SpaceError::TooFewNodes);
        }
        if !valid_partition(&nodes) {
            return Err(SpaceError::BadPartition);
        }
        if values.len() != nodes.len() {
            return Err(SpaceError::LengthMismatch {
                expected: nodes.len(),
                got: values.len(),
            });
        }
        Ok(Self::canonical(nodes, values))
    }

    /// Builds the PL interpolant through `(t, value)` pairs. The points need
    /// not be sorted or include the endpoints; the function is extended
    /// constantly to the left of the first and right of the last point.
    pub fn through(points: impl IntoIterator<Item = (Scalar, Scalar)>) -> Result<Self, SpaceError> {
        let mut pts: Vec<(Scalar, Scalar)> = points.into_iter().collect();
        for (t, _) in &pts {
            check_unit(t)?;
        }
        pts.sort_by(|a, b| a.0.cmp(&b.0));
        pts.dedup_by(|a, b| a.0 == b.0);
        let Some(first) = pts.first().cloned() else {
            return Err(SpaceError::TooFewNodes);
        };
        let last = pts.last().cloned().unwrap();
        if !first.0.is_zero() {
            pts.insert(0, (Scalar::zero(), first.1));
        }
        if !last.0.is_one() {
            pts.push((Scalar::one(), last.1));
        }
        let (nodes, values) = pts.into_iter().unzip();
        Self::new(nodes, values)
    }

    /// Drops nodes that lie on the segment joining their neighbours.
    fn canonical(nodes: Vec<Scalar>, values: Vec<Scalar>) -> Self {
        let mut n: Vec<Scalar> = Vec::with_capacity(nodes.len());
        let mut v: Vec<Scalar> = Vec::with_capacity(values.len());
        for (t, y) in nodes.into_iter().zip(values) {
            if n.len() >= 2 {
                let k = n.len();
                let s1 = (&v[k - 1] - &v[k - 2]) / (&n[k - 1] - &n[k - 2]);
                let s2 = (&y - &v[k - 1]) / (&t - &n[k - 1]);
                if s1 == s2 {
                    n[k - 1] = t;
                    v[k - 1] = y;
                    continue;
                }
            }
            n.push(t);
            v.push(y);
        }
        Self {
            nodes: n,
            values: v,
        }
    }

    pub fn constant(c: Scalar) -> Self {
        Self {
            nodes: vec![Scalar::zero(), Scalar::one()],
            values: vec![c.clone(), c],
        }
    }

    pub fn nodes(&self) -> &[Scalar] {
        &self.nodes
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn eval(&self, t: &Scalar) -> Scalar {
        let k = self.nodes[1..]
            .iter()
            .position(|b| t <= b)
            .unwrap_or(self.nodes.len() - 2);
        let (a, b) = (&self.nodes[k], &self.nodes[k + 1]);
        let (fa, fb) = (&self.values[k], &self.values[k + 1]);
        fa + (fb - fa) * (t - a) / (b - a)
    }

    /// Maximum of |f|; attained at a node.
    pub fn sup_norm(&self) -> Scalar {
        self.values
            .iter()
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(Scalar::zero)
    }

    /// Largest absolute slope.
    pub fn lipschitz(&self) -> Scalar {
        self.nodes
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(t, v)| ((&v[1] - &v[0]) / (&t[1] - &t[0])).abs())
            .max()
            .unwrap_or_else(Scalar::zero)
    }

    /// Values at each point of `partition`, which may be any increasing list
    /// of points in [0,1].
    pub fn values_on(&self, partition: &[Scalar]) -> Vec<Scalar> {
        partition.iter().map(|t| self.eval(t)).collect()
    }

    pub fn add_scaled(&self, other: &PLFunction, lambda: &Scalar) -> Self {
        let nodes = merge_points(&self.nodes, &other.nodes);
        let values = nodes
            .iter()
            .map(|t| self.eval(t) + lambda * other.eval(t))
            .collect();
        Self::canonical(nodes, values)
    }

    pub fn scale(&self, lambda: &Scalar) -> Self {
        Self::canonical(
            self.nodes.clone(),
            self.values.iter().map(|v| lambda * v).collect(),
        )
    }
}
