//! Structured check outcomes.
//!
//! Every inequality check reports the same way: a name, a pass flag, the
//! worst signed margin over all evaluation points (`rhs - lhs`, so negative
//! means violation), an optional witness, and a map of named numbers. The
//! pass rule is uniform: `worst_margin >= -(abs_tol + rel_tol * scale)`
//! with the scale recorded under `details["scale"]`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{Operator, ToleranceConfig};

/// Operators and scalars pinpointing a particular checked instance, in a
/// form that survives serialization. Operator values use the operator file
/// format, so a witness entry can be written straight to disk and fed back
/// through the CLI.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Witness {
    pub operators: BTreeMap<String, Operator>,
    pub scalars: BTreeMap<String, f64>,
}

impl Witness {
    pub fn new() -> Self {
        Witness::default()
    }

    pub fn with_operator(mut self, name: &str, op: &Operator) -> Self {
        self.operators.insert(name.to_string(), op.clone());
        self
    }

    pub fn with_scalar(mut self, name: &str, value: f64) -> Self {
        self.scalars.insert(name.to_string(), value);
        self
    }
}

/// Outcome of one check. Field order is the serialization order; `details`
/// is a sorted map, so identical runs serialize identically.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub passed: bool,
    pub worst_margin: f64,
    pub witness: Option<Witness>,
    pub details: BTreeMap<String, f64>,
}

impl VerificationReport {
    /// Standard construction: pass iff the margin clears the tolerance at
    /// the given scale.
    pub fn from_margin(name: &str, worst_margin: f64, scale: f64, tol: &ToleranceConfig) -> Self {
        let mut details = BTreeMap::new();
        details.insert("scale".to_string(), scale);
        VerificationReport {
            name: name.to_string(),
            passed: worst_margin >= -tol.slack(scale),
            worst_margin,
            witness: None,
            details,
        }
    }

    /// Construction for checks whose verdict is a derived boolean (for
    /// example a biconditional agreement) rather than a raw margin.
    pub fn from_flag(name: &str, passed: bool) -> Self {
        VerificationReport {
            name: name.to_string(),
            passed,
            worst_margin: if passed { 0.0 } else { -1.0 },
            witness: None,
            details: BTreeMap::new(),
        }
    }

    pub fn insert_detail(&mut self, key: &str, value: f64) {
        self.details.insert(key.to_string(), value);
    }

    pub fn with_witness(mut self, witness: Witness) -> Self {
        self.witness = Some(witness);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}
