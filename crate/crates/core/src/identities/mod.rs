//! Numerical checks of the resolvent and generating-function identities,
//! each reported with the truncation tail bound that justifies its gap.

mod operator;
mod scalar;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use operator::{
    adjacency_matrix, biresolvent_partial_sum, resolvent_partial_sum, verify_biresolvent, verify_nbw_generating,
    verify_resolvent_series,
};
pub use scalar::{
    eval_biregular_scalar_identity, eval_parity_identities, eval_regular_scalar_identity, truncation_sequence,
    TruncationPoint,
};

/// Rounding allowance added to every tail bound for the operator identities.
pub const ARITHMETIC_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_gap: f64,
    pub rel_gap: f64,
    pub terms: usize,
    pub tail_bound: f64,
    /// Slack allowed on top of the tail bound.
    pub tolerance: f64,
    pub passes: bool,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub diagnostics: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl IdentityReport {
    pub(crate) fn new(name: &str, params: &[(&str, f64)], lhs: f64, rhs: f64, abs_gap: f64) -> IdentityReport {
        IdentityReport {
            name: name.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            lhs,
            rhs,
            abs_gap,
            rel_gap: if rhs != 0.0 { abs_gap / rhs.abs() } else { abs_gap },
            terms: 0,
            tail_bound: 0.0,
            tolerance: 0.0,
            passes: false,
            diagnostics: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub(crate) fn judge(mut self, terms: usize, tail_bound: f64, tolerance: f64) -> IdentityReport {
        self.terms = terms;
        self.tail_bound = tail_bound;
        self.tolerance = tolerance;
        self.passes = self.abs_gap <= tail_bound + tolerance;
        self
    }
}

/// Neumaier's compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}
