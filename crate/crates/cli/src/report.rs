use bsa_core::certificate::Certificate;
use serde_json::{json, Map, Value};

use crate::Config;

/// Sections of a report in insertion order, plus the clauses that decide
/// the exit code.
#[derive(Default)]
pub struct Report {
    sections: Vec<(String, Value)>,
    checks: Vec<(String, bool)>,
}

impl Report {
    pub fn section(&mut self, key: &str, value: Value) {
        self.sections.push((key.to_string(), value));
    }

    /// A boolean clause that must hold for exit code 0.
    pub fn check(&mut self, label: impl Into<String>, ok: bool) -> bool {
        self.checks.push((label.into(), ok));
        ok
    }

    pub fn certificate(&mut self, key: &str, cert: &Certificate) {
        self.check(format!("{key}: all clauses"), cert.passed());
        self.section(key, json!({ "passed": cert.passed(), "certificate": cert }));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    pub fn into_json(self, command: &str, cfg: &Config, timings: Value) -> Value {
        let passed = self.passed();
        let mut sections = Map::new();
        for (k, v) in self.sections {
            sections.insert(k, v);
        }
        let checks: Vec<Value> = self
            .checks
            .into_iter()
            .map(|(label, ok)| json!({ "label": label, "passed": ok }))
            .collect();
        json!({
            "schema": 1,
            "command": command,
            "config": {
                "seed": cfg.seed,
                "n": cfg.n,
                "depth": cfg.depth,
                "samples": cfg.samples,
                "input": cfg.input.as_ref().map(|p| p.display().to_string()),
            },
            "passed": passed,
            "checks": checks,
            "sections": sections,
            "timings": timings,
        })
    }
}
