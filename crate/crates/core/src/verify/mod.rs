//! Numerical checks of the exact identities and inequalities, implied-constant
//! estimators, tightness scores and a seeded scan harness.

mod checks;
mod constants;
mod scalars;
mod scan;
mod suite;
mod tightness;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub use checks::{
    check_comparison, check_duality, check_harris, check_noise_monotone, check_or_extension,
    check_suf1, check_suf2, RHO_GRID_POINTS,
};
pub use constants::{
    chang_constant, chang_pair_constant, first_level_optimality, lemma_talagrand_constant,
    lemma_talagrand_d_constant, talagrand_d_factor, TalagrandD,
};
pub use scalars::{check_phi_grid, check_psi2_grid, check_psi_n_grid, scalar_lemma_suite};
pub use scan::{scan, ScanGenerator, ScanTarget};
pub use suite::{
    implied_constants, random_pair_spec, random_pairs, run_property_suite, standard_suite,
    tightness_suite, ImpliedConstants, PropertySuiteConfig, SuitePair, STANDARD_SEED,
};
pub use tightness::{
    cormaj_score, mors_gap, peres_ns_ratio, tightness_ratio, CormajScore, MorsGap,
};

/// Outcome of one checker or one aggregated suite entry.
///
/// When `passed` is false, `witness` holds enough to replay the failure: a JSON
/// object with the family specs and seed for suite runs, or the offending grid
/// point for table-level checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub implied_constant: Option<f64>,
    #[serde(default)]
    pub details: BTreeMap<String, Value>,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, passed: bool) -> Self {
        CheckResult {
            name: name.into(),
            passed,
            witness: None,
            implied_constant: None,
            details: BTreeMap::new(),
        }
    }

    pub fn with_witness(mut self, witness: impl Into<String>) -> Self {
        self.witness = Some(witness.into());
        self
    }

    pub fn with_constant(mut self, c: f64) -> Self {
        self.implied_constant = Some(c);
        self
    }

    pub fn detail(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.details.insert(key.to_string(), value.into());
        self
    }

    pub fn set_detail(&mut self, key: &str, value: impl Into<Value>) {
        self.details.insert(key.to_string(), value.into());
    }
}

/// Running extremum of an implied constant with the label of the instance
/// that produced it. The maximum never decreases as instances are added.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ConstantTracker {
    pub max: Option<f64>,
    pub argmax: Option<String>,
    pub count: usize,
}

impl ConstantTracker {
    pub fn push(&mut self, label: &str, value: f64) {
        self.count += 1;
        // strict comparison keeps the earliest instance on ties
        if self.max.is_none_or(|m| value > m) {
            self.max = Some(value);
            self.argmax = Some(label.to_string());
        }
    }
}
