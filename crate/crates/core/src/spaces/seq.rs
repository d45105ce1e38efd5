use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use super::SpaceError;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeqNorm {
    /// c0 norm.
    Sup,
    /// l1 norm.
    Sum,
}

/// Finitely supported real sequence indexed from 1. Zero entries are never
/// stored, so structural equality is equality of sequences.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseSeq {
    entries: BTreeMap<usize, Scalar>,
}

impl SparseSeq {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds a sequence from `(index, value)` pairs; repeated indices are
    /// summed and zeros dropped.
    pub fn from_entries(
        entries: impl IntoIterator<Item = (usize, Scalar)>,
    ) -> Result<Self, SpaceError> {
        let mut map: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (i, v) in entries {
            if i == 0 {
                return Err(SpaceError::ZeroIndex(i));
            }
            *map.entry(i).or_insert_with(Scalar::zero) += v;
        }
        map.retain(|_, v| !v.is_zero());
        Ok(Self { entries: map })
    }

    pub fn get(&self, i: usize) -> Scalar {
        self.entries.get(&i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, &Scalar)> + '_ {
        self.entries.iter().map(|(i, v)| (*i, v))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    pub fn max_index(&self) -> usize {
        self.entries.keys().next_back().copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn norm(&self, which: SeqNorm) -> Scalar {
        match which {
            SeqNorm::Sup => self
                .entries
                .values()
                .map(|v| v.abs())
                .max()
                .unwrap_or_else(Scalar::zero),
            SeqNorm::Sum => self.entries.values().map(|v| v.abs()).sum(),
        }
    }

    /// Duality pairing Σ aₖ xₖ between l1 and c0.
    pub fn pair(&self, other: &SparseSeq) -> Scalar {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .entries
            .iter()
            .filter_map(|(i, v)| large.entries.get(i).map(|w| v * w))
            .sum()
    }

    /// `self + lambda * other`.
    pub fn add_scaled(&self, other: &SparseSeq, lambda: &Scalar) -> SparseSeq {
        let mut map = self.entries.clone();
        for (i, v) in &other.entries {
            *map.entry(*i).or_insert_with(Scalar::zero) += lambda * v;
        }
        map.retain(|_, v| !v.is_zero());
        SparseSeq { entries: map }
    }

    pub fn scale(&self, lambda: &Scalar) -> SparseSeq {
        SparseSeq::zero().add_scaled(self, lambda)
    }
}

pub fn seq_norm(x: &SparseSeq, which: SeqNorm) -> Scalar {
    x.norm(which)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn seq(e: &[(usize, Scalar)]) -> SparseSeq {
        SparseSeq::from_entries(e.iter().cloned()).unwrap()
    }

    #[test]
    fn norms_match_examples() {
        let x = seq(&[(1, int(1)), (2, int(-2))]);
        assert_eq!(x.norm(SeqNorm::Sum), int(3));
        assert_eq!(SparseSeq::zero().norm(SeqNorm::Sup), int(0));
        assert_eq!(seq(&[(3, rat(1, 2))]).norm(SeqNorm::Sup), rat(1, 2));
    }

    #[test]
    fn zeros_are_dropped_and_index_zero_rejected() {
        let x = seq(&[(1, int(0)), (2, int(1)), (2, int(-1))]);
        assert!(x.is_zero());
        assert_eq!(
            SparseSeq::from_entries([(0, int(1))]),
            Err(SpaceError::ZeroIndex(0))
        );
    }

    #[test]
    fn pairing_and_combination() {
        let a = seq(&[(1, int(1)), (2, int(-2))]);
        let x = seq(&[(1, int(1)), (2, int(-1)), (3, rat(1, 10))]);
        assert_eq!(a.pair(&x), int(3));
        let s = a.add_scaled(&a, &int(-1));
        assert!(s.is_zero());
    }
}
