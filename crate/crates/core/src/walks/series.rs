use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::scaled::Scaled;
use crate::weight::rational_ln;

/// Bit length past which exact values give way to log-space magnitudes.
pub const DEFAULT_LOG_THRESHOLD_BITS: u64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SeriesKind {
    /// `b_r(f)`: all walks.
    #[serde(rename = "b")]
    Walk,
    /// `a_r(f)`: non-backtracking walks.
    #[serde(rename = "a")]
    NonBacktracking,
}

impl SeriesKind {
    pub fn letter(self) -> &'static str {
        match self {
            SeriesKind::Walk => "b",
            SeriesKind::NonBacktracking => "a",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CountEntry {
    /// Present while the inputs are exact and the value is below the bit threshold.
    pub exact: Option<BigRational>,
    /// Natural log of the value, `NEG_INFINITY` for zero.
    pub log_value: f64,
    /// `false` when the value was computed on a truncated ball past its
    /// exactness horizon.
    pub within_horizon: bool,
}

impl CountEntry {
    pub fn from_exact(q: BigRational, threshold_bits: u64, within_horizon: bool) -> CountEntry {
        let log_value = rational_ln(&q);
        let keep = q.numer().bits().max(q.denom().bits()) <= threshold_bits;
        CountEntry {
            exact: keep.then_some(q),
            log_value,
            within_horizon,
        }
    }

    pub fn from_scaled(x: Scaled, within_horizon: bool) -> CountEntry {
        CountEntry {
            exact: None,
            log_value: x.ln(),
            within_horizon,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.log_value == f64::NEG_INFINITY
    }

    pub fn to_scaled(&self) -> Scaled {
        Scaled::from_ln(self.log_value)
    }
}

/// Norm data that sharpens truncation bounds for series paired against a
/// tree: `ln ||A^p f||_2` and `ln ||A^q delta_e||_2` for small `p`, `q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormProfile {
    pub ln_f: Vec<f64>,
    pub ln_root: Vec<f64>,
}

/// The sequence `a_r(f)` or `b_r(f)` for `r = 0..=r_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct CountSeries {
    pub kind: SeriesKind,
    pub base: usize,
    pub provenance: String,
    pub entries: Vec<CountEntry>,
    /// Radius about the base outside which `f` vanishes, when that is known
    /// and the arena is a tree.
    pub support_radius: Option<usize>,
    pub norms: Option<NormProfile>,
}

impl CountSeries {
    pub fn r_max(&self) -> usize {
        self.entries.len().saturating_sub(1)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn exact(&self, r: usize) -> Option<&BigRational> {
        self.entries.get(r).and_then(|e| e.exact.as_ref())
    }

    /// All values exactly, or `None` if any entry is log-only.
    pub fn exact_values(&self) -> Option<Vec<BigRational>> {
        self.entries.iter().map(|e| e.exact.clone()).collect()
    }

    pub fn log_values(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.log_value).collect()
    }

    pub fn value_f64(&self, r: usize) -> f64 {
        self.entries[r].log_value.exp()
    }

    pub fn all_within_horizon(&self) -> bool {
        self.entries.iter().all(|e| e.within_horizon)
    }
}
