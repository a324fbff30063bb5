//! Growth-rate estimates for count series and the co-growth maps relating
//! the growth rate `alpha` of `a_r(f)` to the growth rate `beta` of `b_r(f)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ball::check_tree_degrees;
use crate::error::{Error, Result};
use crate::walks::CountSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// `s_r^{1/r}` at the end of the window.
    Root,
    /// Mean of `s_{r+1} / s_r`.
    Ratio,
    /// Mean of `(s_{r+2} / s_r)^{1/2}`, safe for series supported on one parity.
    Ratio2,
    /// `exp` of the least-squares slope of `ln s_r` against `r`.
    LogFit,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Method> {
        match s {
            "root" => Ok(Method::Root),
            "ratio" => Ok(Method::Ratio),
            "ratio2" => Ok(Method::Ratio2),
            "logfit" => Ok(Method::LogFit),
            _ => Err(Error::InvalidParameter(format!("unknown method {s:?}"))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Root => "root",
            Method::Ratio => "ratio",
            Method::Ratio2 => "ratio2",
            Method::LogFit => "logfit",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthEstimate {
    pub value: f64,
    pub method: Method,
    /// Inclusive index range `(lo, hi)`.
    pub window: (usize, usize),
    /// Spread `max - min` of the per-index estimates in the window; for
    /// `logfit`, the largest absolute residual of the fit in log units.
    pub residual: f64,
}

/// The final tenth of the series, and never fewer than four indices so that
/// two-step ratios see both parities.
pub fn default_window(len: usize) -> (usize, usize) {
    let hi = len.saturating_sub(1);
    (hi.saturating_sub((len / 10).max(3)), hi)
}

fn spread(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    max - min
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Estimate the exponential growth rate of `s` over `window` (default: the
/// final tenth).
///
/// A series that is nonzero somewhere but vanishes on the whole window is
/// eventually zero and gets rate 0.
pub fn estimate_growth_rate(s: &CountSeries, method: Method, window: Option<(usize, usize)>) -> Result<GrowthEstimate> {
    if s.is_empty() {
        return Err(Error::InsufficientTerms("empty series".into()));
    }
    let (lo, hi) = window.unwrap_or_else(|| default_window(s.len()));
    if lo > hi || hi > s.r_max() {
        return Err(Error::InvalidParameter(format!(
            "window ({lo}, {hi}) outside 0..={}",
            s.r_max()
        )));
    }
    let logs = s.log_values();
    let nonzero = |r: usize| logs[r] != f64::NEG_INFINITY;
    if !(0..s.len()).any(nonzero) {
        return Err(Error::AllZero);
    }
    let done = |value: f64, residual: f64| GrowthEstimate {
        value,
        method,
        window: (lo, hi),
        residual,
    };
    if !(lo..=hi).any(nonzero) {
        return Ok(done(0.0, 0.0));
    }
    let per_index: Vec<f64> = match method {
        Method::Root => (lo.max(1)..=hi)
            .filter(|&r| nonzero(r))
            .map(|r| (logs[r] / r as f64).exp())
            .collect(),
        Method::Ratio => (lo..hi)
            .filter(|&r| nonzero(r) && nonzero(r + 1))
            .map(|r| (logs[r + 1] - logs[r]).exp())
            .collect(),
        Method::Ratio2 => (lo..hi.saturating_sub(1))
            .filter(|&r| nonzero(r) && nonzero(r + 2))
            .map(|r| ((logs[r + 2] - logs[r]) / 2.0).exp())
            .collect(),
        Method::LogFit => {
            let points: Vec<(f64, f64)> = (lo..=hi).filter(|&r| nonzero(r)).map(|r| (r as f64, logs[r])).collect();
            if points.len() < 2 {
                return Err(Error::ParityMismatch);
            }
            let mx = mean(&points.iter().map(|p| p.0).collect::<Vec<_>>());
            let my = mean(&points.iter().map(|p| p.1).collect::<Vec<_>>());
            let sxy: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
            let sxx: f64 = points.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
            let slope = sxy / sxx;
            let residual = points
                .iter()
                .map(|(x, y)| (y - (my + slope * (x - mx))).abs())
                .fold(0.0, f64::max);
            return Ok(done(slope.exp(), residual));
        }
    };
    if per_index.is_empty() {
        return Err(match method {
            Method::Root => Error::InsufficientTerms("window holds only r = 0".into()),
            _ => Error::ParityMismatch,
        });
    }
    let value = match method {
        Method::Root => *per_index.last().unwrap(),
        _ => mean(&per_index),
    };
    Ok(done(value, spread(&per_index)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `alpha` at or below the threshold; `beta` equals `||A||`.
    Subcritical,
    Supercritical,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cogrowth {
    pub beta: f64,
    pub branch: Branch,
    /// Degree 2 throughout: the tree is a line.
    pub degenerate: bool,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha >= 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "alpha = {alpha} must be finite and non-negative"
        )))
    }
}

fn check_degree(d: usize) -> Result<()> {
    if d >= 2 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("degree {d} must be at least 2")))
    }
}

/// `sqrt(d-1)`, where the regular map changes branch.
pub fn regular_threshold(d: usize) -> f64 {
    ((d - 1) as f64).sqrt()
}

/// `((k-1)(l-1))^{1/4}`, where the bi-regular map changes branch.
pub fn biregular_threshold(k: usize, l: usize) -> f64 {
    (((k - 1) * (l - 1)) as f64).powf(0.25)
}

/// `||A||` on the `(k, l)` tree.
pub fn biregular_norm(k: usize, l: usize) -> f64 {
    ((k - 1) as f64).sqrt() + ((l - 1) as f64).sqrt()
}

pub fn cogrowth_regular(alpha: f64, d: usize) -> Result<Cogrowth> {
    check_alpha(alpha)?;
    check_degree(d)?;
    let t = regular_threshold(d);
    let (beta, branch) = if alpha <= t {
        (2.0 * t, Branch::Subcritical)
    } else {
        (alpha + (d - 1) as f64 / alpha, Branch::Supercritical)
    };
    Ok(Cogrowth {
        beta,
        branch,
        degenerate: d == 2,
    })
}

fn biregular_map(rho: f64, k: usize, l: usize) -> f64 {
    ((rho + (k - 1) as f64 / rho) * (rho + (l - 1) as f64 / rho)).sqrt()
}

pub fn cogrowth_biregular(alpha: f64, k: usize, l: usize) -> Result<Cogrowth> {
    check_alpha(alpha)?;
    check_tree_degrees(k, l)?;
    let (beta, branch) = if alpha <= biregular_threshold(k, l) {
        (biregular_norm(k, l), Branch::Subcritical)
    } else {
        (biregular_map(alpha, k, l), Branch::Supercritical)
    };
    Ok(Cogrowth {
        beta,
        branch,
        degenerate: k == 2 && l == 2,
    })
}

/// Relative slack below the threshold still read as the threshold itself.
const THRESHOLD_SLACK: f64 = 4.0 * f64::EPSILON;

fn check_beta(beta: f64, floor: f64) -> Result<bool> {
    if !beta.is_finite() || beta < floor * (1.0 - THRESHOLD_SLACK) {
        return Err(Error::InvalidParameter(format!(
            "beta = {beta} is below the minimum {floor}"
        )));
    }
    Ok(beta <= floor)
}

/// The unique `rho >= sqrt(d-1)` with `rho + (d-1)/rho = beta`.
pub fn inverse_cogrowth_regular(beta: f64, d: usize) -> Result<f64> {
    check_degree(d)?;
    let t = regular_threshold(d);
    if check_beta(beta, 2.0 * t)? {
        return Ok(t);
    }
    Ok((beta + ((beta - 2.0 * t) * (beta + 2.0 * t)).sqrt()) / 2.0)
}

/// The unique `rho >= ((k-1)(l-1))^{1/4}` mapped to `beta`, by bisection.
pub fn inverse_cogrowth_biregular(beta: f64, k: usize, l: usize) -> Result<f64> {
    check_tree_degrees(k, l)?;
    let t = biregular_threshold(k, l);
    if check_beta(beta, biregular_norm(k, l))? {
        return Ok(t);
    }
    // the map dominates rho, so beta itself is an upper end
    let (mut lo, mut hi) = (t, beta.max(t));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if biregular_map(mid, k, l) < beta {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
