//! Machine-readable run reports.
//!
//! The body of a report depends only on the input and the options, so two
//! runs with the same seed serialize to identical bytes. Wall-clock timings
//! sit beside the body.

use std::collections::BTreeMap;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::oracle::{AssocReport, ComparisonReport};
use crate::predicates::PropertyReport;
use crate::subgroup::{exponent_of, min_generators, nilpotency_class, SubgroupError};
use crate::theorems::{Status, TheoremVerdict};
use crate::view::GroupView;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupSummary {
    pub label: String,
    pub prime: u32,
    pub order: usize,
    pub nilpotency_class: usize,
    pub exponent: u64,
    pub min_generators: u32,
    pub generators: Vec<String>,
}

impl GroupSummary {
    pub fn of<G: GroupView + ?Sized>(g: &G, label: &str) -> Result<Self, SubgroupError> {
        Ok(Self {
            label: label.to_string(),
            prime: g.prime(),
            order: g.order(),
            nilpotency_class: nilpotency_class(g)?,
            exponent: exponent_of(g),
            min_generators: min_generators(g)?,
            generators: g.generator_names(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputInfo {
    pub name: String,
    pub sha256: String,
    pub bytes: usize,
}

impl InputInfo {
    pub fn of(name: &str, bytes: &[u8]) -> Self {
        Self {
            name: name.to_string(),
            sha256: sha256_hex(bytes),
            bytes: bytes.len(),
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SubgroupSummary {
    pub mode: String,
    pub subgroups: usize,
    /// Number of subgroups of each order.
    pub by_order: BTreeMap<usize, usize>,
    /// Number of subgroups needing each number of generators.
    pub by_rank: BTreeMap<u32, usize>,
    pub max_rank: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleSummary {
    pub latin_square: bool,
    pub associativity: AssocReport,
    pub comparison: ComparisonReport,
}

impl OracleSummary {
    pub fn passed(&self) -> bool {
        self.latin_square && self.associativity.failure.is_none() && self.comparison.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportBody {
    pub schema_version: u32,
    pub tool_version: String,
    pub command: String,
    pub input: InputInfo,
    pub seed: u64,
    /// Command options that affect the body, by name.
    pub options: BTreeMap<String, String>,
    pub group: GroupSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub properties: Option<PropertyReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub verdicts: Vec<TheoremVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subgroups: Option<SubgroupSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSummary>,
    pub passed: bool,
}

impl ReportBody {
    pub fn new(command: &str, input: InputInfo, seed: u64, group: GroupSummary) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool_version: TOOL_VERSION.to_string(),
            command: command.to_string(),
            input,
            seed,
            options: BTreeMap::new(),
            group,
            properties: None,
            verdicts: Vec::new(),
            subgroups: None,
            oracle: None,
            passed: true,
        }
    }

    pub fn option(mut self, name: &str, value: impl ToString) -> Self {
        self.options.insert(name.to_string(), value.to_string());
        self
    }

    /// No verdict fails with its hypothesis satisfied.
    pub fn verdicts_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.status != Status::Fails)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseTiming {
    pub phase: String,
    pub millis: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub body: ReportBody,
    pub timing: Vec<PhaseTiming>,
}

impl RunReport {
    pub fn new(body: ReportBody) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            body,
            timing: Vec::new(),
        }
    }

    pub fn time(&mut self, phase: &str, d: std::time::Duration) {
        self.timing.push(PhaseTiming {
            phase: phase.to_string(),
            millis: d.as_secs_f64() * 1e3,
        });
    }

    pub fn body_json(&self) -> String {
        serde_json::to_string_pretty(&self.body).expect("report body serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
