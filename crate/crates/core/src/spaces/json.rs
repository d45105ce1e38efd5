//! Canonical JSON encodings. Every rational is `{"num": "..", "den": ".."}`.
//!
//! ```text
//! SparseSeq       {"entries": [{"index": 1, "value": Q}, ...]}
//! StepFunction    {"breakpoints": [Q, ...], "values": [Q, ...]}
//! PiecewiseAffine {"breakpoints": [Q, ...], "limits": [[Q, Q], ...]}
//! PLFunction      {"nodes": [Q, ...], "values": [Q, ...]}
//! Measure         {"atoms": [{"location": Q, "weight": Q}], "density": StepFunction}
//! IntervalSet     {"intervals": [[Q, Q], ...]}
//! ```

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Atom, IntervalSet, Measure, PLFunction, PiecewiseAffine, SparseSeq, StepFunction};
use crate::scalar::{Scalar, Q};

fn qs(v: &[Scalar]) -> Vec<Q> {
    v.iter().map(Q::from).collect()
}

fn unq(v: Vec<Q>) -> Vec<Scalar> {
    v.into_iter().map(|q| q.0).collect()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryRepr {
    index: usize,
    value: Q,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeqRepr {
    entries: Vec<EntryRepr>,
}

impl Serialize for SparseSeq {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SeqRepr {
            entries: self
                .entries()
                .map(|(index, v)| EntryRepr {
                    index,
                    value: Q::from(v),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SparseSeq {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = SeqRepr::deserialize(d)?;
        SparseSeq::from_entries(r.entries.into_iter().map(|e| (e.index, e.value.0)))
            .map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StepRepr {
    breakpoints: Vec<Q>,
    values: Vec<Q>,
}

impl Serialize for StepFunction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        StepRepr {
            breakpoints: qs(self.breakpoints()),
            values: qs(self.values()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for StepFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = StepRepr::deserialize(d)?;
        StepFunction::new(unq(r.breakpoints), unq(r.values)).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AffineRepr {
    breakpoints: Vec<Q>,
    limits: Vec<(Q, Q)>,
}

impl Serialize for PiecewiseAffine {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        AffineRepr {
            breakpoints: qs(self.breakpoints()),
            limits: self
                .limits()
                .iter()
                .map(|(l, r)| (Q::from(l), Q::from(r)))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PiecewiseAffine {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = AffineRepr::deserialize(d)?;
        PiecewiseAffine::new(
            unq(r.breakpoints),
            r.limits.into_iter().map(|(l, r)| (l.0, r.0)).collect(),
        )
        .map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PLRepr {
    nodes: Vec<Q>,
    values: Vec<Q>,
}

impl Serialize for PLFunction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PLRepr {
            nodes: qs(self.nodes()),
            values: qs(self.values()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PLFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = PLRepr::deserialize(d)?;
        PLFunction::new(unq(r.nodes), unq(r.values)).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AtomRepr {
    location: Q,
    weight: Q,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MeasureRepr {
    #[serde(default)]
    atoms: Vec<AtomRepr>,
    #[serde(default = "StepFunction::zero")]
    density: StepFunction,
}

impl Serialize for Measure {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MeasureRepr {
            atoms: self
                .atoms()
                .iter()
                .map(|a| AtomRepr {
                    location: Q::from(&a.location),
                    weight: Q::from(&a.weight),
                })
                .collect(),
            density: self.density().clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Measure {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = MeasureRepr::deserialize(d)?;
        Measure::new(
            r.atoms
                .into_iter()
                .map(|a| Atom {
                    location: a.location.0,
                    weight: a.weight.0,
                })
                .collect(),
            r.density,
        )
        .map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IntervalsRepr {
    intervals: Vec<(Q, Q)>,
}

impl Serialize for IntervalSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        IntervalsRepr {
            intervals: self
                .intervals()
                .iter()
                .map(|(a, b)| (Q::from(a), Q::from(b)))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntervalSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = IntervalsRepr::deserialize(d)?;
        IntervalSet::new(r.intervals.into_iter().map(|(a, b)| (a.0, b.0))).map_err(D::Error::custom)
    }
}
