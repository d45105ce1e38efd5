use num_traits::Zero;

use super::{check_unit, SpaceError};
use crate::scalar::Scalar;

/// Finite union of closed intervals in [0,1], kept sorted with overlapping or
/// touching intervals merged. Degenerate intervals `[p, p]` are allowed and
/// represent isolated points (atoms in a closed support).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntervalSet {
    parts: Vec<(Scalar, Scalar)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn single(a: Scalar, b: Scalar) -> Result<Self, SpaceError> {
        Self::new([(a, b)])
    }

    pub fn new(parts: impl IntoIterator<Item = (Scalar, Scalar)>) -> Result<Self, SpaceError> {
        let mut v: Vec<(Scalar, Scalar)> = Vec::new();
        for (a, b) in parts {
            if a > b {
                return Err(SpaceError::ReversedInterval(Box::new((a, b))));
            }
            check_unit(&a)?;
            check_unit(&b)?;
            v.push((a, b));
        }
        Ok(Self::normalized(v))
    }

    fn normalized(mut v: Vec<(Scalar, Scalar)>) -> Self {
        v.sort();
        let mut out: Vec<(Scalar, Scalar)> = Vec::with_capacity(v.len());
        for (a, b) in v {
            match out.last_mut() {
                Some(last) if a <= last.1 => {
                    if b > last.1 {
                        last.1 = b;
                    }
                }
                _ => out.push((a, b)),
            }
        }
        Self { parts: out }
    }

    pub fn intervals(&self) -> &[(Scalar, Scalar)] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    /// Lebesgue measure.
    pub fn measure(&self) -> Scalar {
        self.parts.iter().map(|(a, b)| b - a).sum()
    }

    pub fn contains(&self, t: &Scalar) -> bool {
        self.parts.iter().any(|(a, b)| a <= t && t <= b)
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        Self::normalized(self.parts.iter().chain(&other.parts).cloned().collect())
    }

    pub fn intersection(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        for (a, b) in &self.parts {
            for (c, d) in &other.parts {
                let lo = a.max(c);
                let hi = b.min(d);
                if lo <= hi {
                    out.push((lo.clone(), hi.clone()));
                }
            }
        }
        Self::normalized(out)
    }

    /// Closure of `self ∖ other`. Points of `self` covered only by the
    /// boundary of `other` survive as endpoints, but a piece of positive
    /// length never degenerates into a stray point.
    pub fn difference(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        for (a, b) in &self.parts {
            if a == b {
                if !other.contains(a) {
                    out.push((a.clone(), b.clone()));
                }
                continue;
            }
            // Walk the pieces of [a,b] left uncovered by `other`.
            let mut cursor = a.clone();
            for (c, d) in &other.parts {
                if d < &cursor || c > b {
                    continue;
                }
                if c > &cursor {
                    out.push((cursor.clone(), c.clone()));
                }
                if d > &cursor {
                    cursor = d.clone();
                }
            }
            if &cursor < b {
                out.push((cursor, b.clone()));
            }
        }
        Self::normalized(out)
    }

    /// Distance between the sets; zero when they intersect or touch. `None`
    /// when either set is empty.
    pub fn distance(&self, other: &IntervalSet) -> Option<Scalar> {
        let mut best: Option<Scalar> = None;
        for (a, b) in &self.parts {
            for (c, d) in &other.parts {
                let gap = if b < c {
                    c - b
                } else if d < a {
                    a - d
                } else {
                    Scalar::zero()
                };
                if best.as_ref().is_none_or(|g| &gap < g) {
                    best = Some(gap);
                }
            }
        }
        best
    }

    /// Open gaps of positive length between `lo` and `hi` not covered by the
    /// set, as `(start, end)` pairs.
    pub fn gaps(&self, lo: &Scalar, hi: &Scalar) -> Vec<(Scalar, Scalar)> {
        let mut out = Vec::new();
        let mut cursor = lo.clone();
        for (a, b) in &self.parts {
            if b < lo {
                continue;
            }
            if a >= hi {
                break;
            }
            if a > &cursor {
                out.push((cursor.clone(), a.clone()));
            }
            if b > &cursor {
                cursor = b.clone();
            }
        }
        if &cursor < hi {
            out.push((cursor, hi.clone()));
        }
        out
    }

    pub fn first_point(&self) -> Option<&Scalar> {
        self.parts.first().map(|p| &p.0)
    }

    pub fn last_point(&self) -> Option<&Scalar> {
        self.parts.last().map(|p| &p.1)
    }
}
