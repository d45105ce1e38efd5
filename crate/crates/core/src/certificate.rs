//! Machine-checkable records of verified (in)equalities.

use std::fmt;

use num_traits::Zero;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::scalar::{Scalar, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "==")]
    Eq,
    #[serde(rename = "!=")]
    Ne,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = ">=")]
    Ge,
    /// A boolean fact with no numeric sides.
    #[serde(rename = "holds")]
    Holds,
}

impl Relation {
    fn test(self, lhs: &Scalar, rhs: &Scalar) -> bool {
        match self {
            Relation::Eq => lhs == rhs,
            Relation::Ne => lhs != rhs,
            Relation::Lt => lhs < rhs,
            Relation::Le => lhs <= rhs,
            Relation::Gt => lhs > rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Holds => !lhs.is_zero(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Clause {
    pub label: String,
    pub relation: Relation,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<Q>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<Q>,
    pub pass: bool,
}

/// A named list of checked clauses plus free-form JSON data describing the
/// inputs and outputs they refer to.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Certificate {
    pub name: String,
    pub clauses: Vec<Clause>,
    #[serde(skip_serializing_if = "Map::is_empty")]
    pub data: Map<String, Value>,
}

impl Certificate {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ..Self::default()
        }
    }

    pub fn compare(&mut self, label: impl Into<String>, lhs: &Scalar, relation: Relation, rhs: &Scalar) -> bool {
        let pass = relation.test(lhs, rhs);
        self.clauses.push(Clause {
            label: label.into(),
            relation,
            lhs: Some(Q::from(lhs)),
            rhs: Some(Q::from(rhs)),
            pass,
        });
        pass
    }

    pub fn check_eq(&mut self, label: impl Into<String>, lhs: &Scalar, rhs: &Scalar) -> bool {
        self.compare(label, lhs, Relation::Eq, rhs)
    }

    pub fn check_lt(&mut self, label: impl Into<String>, lhs: &Scalar, rhs: &Scalar) -> bool {
        self.compare(label, lhs, Relation::Lt, rhs)
    }

    pub fn check_le(&mut self, label: impl Into<String>, lhs: &Scalar, rhs: &Scalar) -> bool {
        self.compare(label, lhs, Relation::Le, rhs)
    }

    pub fn holds(&mut self, label: impl Into<String>, fact: bool) -> bool {
        self.clauses.push(Clause {
            label: label.into(),
            relation: Relation::Holds,
            lhs: None,
            rhs: None,
            pass: fact,
        });
        fact
    }

    pub fn put(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("certificate data serializes");
        self.data.insert(key.to_string(), v);
    }

    /// Appends the clauses of `other`, prefixing their labels.
    pub fn absorb(&mut self, prefix: &str, other: Certificate) {
        for mut c in other.clauses {
            c.label = format!("{prefix}: {}", c.label);
            self.clauses.push(c);
        }
        if !other.data.is_empty() {
            self.data.insert(prefix.to_string(), Value::Object(other.data));
        }
    }

    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Clause> {
        self.clauses.iter().filter(|c| !c.pass)
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.name)?;
        for c in &self.clauses {
            let mark = if c.pass { "ok  " } else { "FAIL" };
            match (&c.lhs, &c.rhs) {
                (Some(l), Some(r)) => writeln!(f, "  {mark} {}: {l} {:?} {r}", c.label, c.relation)?,
                _ => writeln!(f, "  {mark} {}", c.label)?,
            }
        }
        Ok(())
    }
}

/// A construction result together with the certificate of its checks.
#[derive(Clone, Debug)]
pub struct Certified<T> {
    pub value: T,
    pub certificate: Certificate,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    #[test]
    fn clauses_record_outcomes() {
        let mut c = Certificate::new("demo");
        assert!(c.check_eq("a", &int(1), &int(1)));
        assert!(c.check_lt("b", &rat(1, 3), &rat(1, 2)));
        assert!(c.passed());
        assert!(!c.check_le("c", &int(2), &int(1)));
        assert!(!c.passed());
        assert_eq!(c.failures().count(), 1);
    }

    #[test]
    fn serializes_rationals_as_strings() {
        let mut c = Certificate::new("x");
        c.check_eq("one", &int(1), &int(1));
        c.holds("fact", true);
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(
            s,
            r#"{"name":"x","clauses":[{"label":"one","relation":"==","lhs":{"num":"1","den":"1"},"rhs":{"num":"1","den":"1"},"pass":true},{"label":"fact","relation":"holds","pass":true}]}"#
        );
    }

    #[test]
    fn absorb_prefixes_labels() {
        let mut inner = Certificate::new("inner");
        inner.holds("p", true);
        inner.put("k", 3);
        let mut outer = Certificate::new("outer");
        outer.absorb("step", inner);
        assert_eq!(outer.clauses[0].label, "step: p");
        assert!(outer.data.contains_key("step"));
    }
}
