//! A catalogue of closed-form identities, the evaluator for their right
//! sides and the verifier that checks them against quadrature and lattice
//! sums.
//!
//! The bundled catalogue is `data/registry.json` (compiled in) followed by
//! the records generated from the exact pipelines.

mod coverage;
mod expr;
mod generated;
mod record;
mod verify;

pub use coverage::{check_coverage, parse_coverage, CoverageEntry};
pub use expr::{evaluate_closed_form, ClosedFormExpr, Constant, Op};
pub use generated::{even_power_record, generated_records, odd_power_record, pipeline_spec};
pub use record::{load_registry, merge_records, parse_registry, Affine, IdentityRecord, LatticeMethod, Lhs, Pipeline, SkippedS, Term, ToleranceClass};
pub use verify::{evaluate_lhs, run_suite, verify_identity, ReportRow, Status, Summary, VerificationReport, DIRECT_RADIUS, QUAD_TOL};

use crate::error::Result;

pub const BUNDLED_REGISTRY: &str = include_str!("../../data/registry.json");
pub const BUNDLED_COVERAGE: &str = include_str!("../../data/coverage.json");

/// The bundled records followed by the generated ones.
pub fn bundled_registry() -> Result<Vec<IdentityRecord>> {
    merge_records(vec![parse_registry(BUNDLED_REGISTRY)?, generated_records()?])
}

/// A registry file's records followed by the generated ones.
pub fn registry_with_generated(path: impl AsRef<std::path::Path>) -> Result<Vec<IdentityRecord>> {
    merge_records(vec![load_registry(path)?, generated_records()?])
}
