use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::record::IdentityRecord;
use crate::error::{Error, Result};

/// One labelled display of the source: covered by registry records, by named
/// module tests, or explicitly out of scope.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageEntry {
    pub label: String,
    /// `identity` entries must be accounted for; others are informational.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub records: Vec<String>,
    /// Tests (`module::test_name`) that check an identity the registry
    /// cannot express, e.g. q-series or derivative formulas.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checked_by: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_of_scope: Option<String>,
}

pub fn parse_coverage(text: &str) -> Result<Vec<CoverageEntry>> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// Problems with the manifest against `records`: identity entries with no
/// records, tests or out-of-scope reason, and dangling record ids.
pub fn check_coverage(manifest: &[CoverageEntry], records: &[IdentityRecord]) -> Vec<String> {
    let ids: HashSet<&str> = records.iter().map(|r| r.id.as_str()).collect();
    let mut problems = Vec::new();
    for e in manifest {
        for r in &e.records {
            if !ids.contains(r.as_str()) {
                problems.push(format!("{}: record {r} is not in the registry", e.label));
            }
        }
        let given = |s: &Option<String>| s.as_ref().is_some_and(|s| !s.trim().is_empty());
        let excused = given(&e.out_of_scope) || given(&e.checked_by);
        if e.kind == "identity" && e.records.is_empty() && !excused {
            problems.push(format!("{}: identity without a record, a test or an out-of-scope marker", e.label));
        }
    }
    problems
}
