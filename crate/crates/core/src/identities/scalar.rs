//! Scalar pairings of the resolvent identities on regular and bi-regular
//! trees:
//!
//! ```text
//! sum_r b_r z^{-r-1} = (rho - 1/rho)^{-1} sum_r a_r rho^{-r},   z = rho + (d-1)/rho
//! z1^{-1} sum_r b_{2r} (z1 z2)^{-r} + sum_r b_{2r+1} (z1 z2)^{-r-1}
//!     = (rho - 1/rho)^{-1} sum_r a_r rho^{-r}
//! ```
//!
//! The `a` side is a finite sum for finitely supported `f`. The `b` side is
//! truncated at the series length and the remainder bounded through
//! `b_m <= ||A^p f|| ||A||^{m-p-q} ||A^q delta_e||`, using whichever split
//! the series' norm profile makes smallest.

use super::{CompensatedSum, IdentityReport};
use crate::ball::check_tree_degrees;
use crate::error::{Error, Result};
use crate::function::RadialProfile;
use crate::walks::{radial_nbw_counts, radial_walk_counts, CountOptions, CountSeries, SeriesKind};

struct Evaluation {
    /// Weighted `b_m`, indexed by `m`.
    b_terms: Vec<f64>,
    /// `(rho - 1/rho)^{-1} a_r rho^{-r}`, indexed by `r`.
    a_terms: Vec<f64>,
    tail: f64,
    params: Vec<(&'static str, f64)>,
    notes: Vec<String>,
}

impl Evaluation {
    fn lhs(&self, parity: Option<usize>) -> f64 {
        select(&self.b_terms, parity)
    }

    fn rhs(&self, parity: Option<usize>) -> f64 {
        select(&self.a_terms, parity)
    }
}

fn select(terms: &[f64], parity: Option<usize>) -> f64 {
    terms
        .iter()
        .enumerate()
        .filter(|(i, _)| parity.is_none_or(|p| i % 2 == p))
        .map(|(_, x)| *x)
        .collect::<CompensatedSum>()
        .value()
}

fn check_series(a: &CountSeries, b: &CountSeries) -> Result<()> {
    if a.kind != SeriesKind::NonBacktracking || b.kind != SeriesKind::Walk {
        return Err(Error::InvalidParameter(
            "expected an a-series and a b-series, in that order".into(),
        ));
    }
    if a.base != b.base {
        return Err(Error::InvalidParameter("series have different base vertices".into()));
    }
    let support = a
        .support_radius
        .ok_or_else(|| Error::Precondition("f must be finitely supported on a tree".into()))?;
    if a.r_max() < support {
        return Err(Error::InsufficientTerms(format!(
            "a-series stops at r = {} before the support radius {support}",
            a.r_max()
        )));
    }
    if b.is_empty() {
        return Err(Error::InsufficientTerms("empty b-series".into()));
    }
    Ok(())
}

/// `ln C` such that `b_m <= C ||A||^m` for every `m` past the end of `b`.
fn ln_tail_constant(b: &CountSeries, ln_norm: f64) -> Result<f64> {
    let norms = b
        .norms
        .as_ref()
        .ok_or_else(|| Error::Precondition("b-series carries no norm profile".into()))?;
    let reach = b.len();
    let mut best = f64::INFINITY;
    for (p, lf) in norms.ln_f.iter().enumerate() {
        for (q, lr) in norms.ln_root.iter().enumerate() {
            if p + q <= reach {
                best = best.min(lf + lr - (p + q) as f64 * ln_norm);
            }
        }
    }
    if best.is_finite() || best == f64::NEG_INFINITY {
        Ok(best)
    } else {
        Err(Error::Precondition("norm profile is empty".into()))
    }
}

fn a_terms(a: &CountSeries, rho: f64) -> Vec<f64> {
    let ln_prefactor = -(rho - 1.0 / rho).ln();
    a.entries
        .iter()
        .enumerate()
        .map(|(r, e)| {
            if e.is_zero() {
                0.0
            } else {
                (e.log_value - r as f64 * rho.ln() + ln_prefactor).exp()
            }
        })
        .collect()
}

fn b_terms(b: &CountSeries, ln_weight: impl Fn(usize) -> f64) -> Vec<f64> {
    b.entries
        .iter()
        .enumerate()
        .map(|(m, e)| {
            if e.is_zero() {
                0.0
            } else {
                (e.log_value + ln_weight(m)).exp()
            }
        })
        .collect()
}

/// `C w Q^{N+1} / (1 - Q)` evaluated in log space.
fn geometric_tail(ln_c: f64, ln_w: f64, q: f64, n: usize) -> f64 {
    if ln_c == f64::NEG_INFINITY {
        return 0.0;
    }
    (ln_c + ln_w + (n as f64 + 1.0) * q.ln() - (1.0 - q).ln()).exp()
}

fn evaluate_regular(a: &CountSeries, b: &CountSeries, d: usize, rho: f64) -> Result<Evaluation> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("degree {d} must be at least 2")));
    }
    check_series(a, b)?;
    let threshold = ((d - 1) as f64).sqrt();
    if !(rho > threshold) || !rho.is_finite() {
        return Err(Error::Precondition(format!(
            "rho = {rho} must exceed sqrt(d-1) = {threshold}"
        )));
    }
    let z = rho + (d - 1) as f64 / rho;
    let norm = 2.0 * threshold;
    let ln_z = z.ln();
    let ln_c = ln_tail_constant(b, norm.ln())?;
    let mut notes = Vec::new();
    if d == 2 {
        notes.push("degenerate: d = 2 lies outside d >= 3".into());
    }
    Ok(Evaluation {
        b_terms: b_terms(b, |m| -(m as f64 + 1.0) * ln_z),
        a_terms: a_terms(a, rho),
        tail: geometric_tail(ln_c, -ln_z, norm / z, b.r_max()),
        params: vec![("d", d as f64), ("rho", rho), ("z", z)],
        notes,
    })
}

fn evaluate_biregular(a: &CountSeries, b: &CountSeries, k: usize, l: usize, rho: f64) -> Result<Evaluation> {
    check_tree_degrees(k, l)?;
    check_series(a, b)?;
    let threshold = (((k - 1) * (l - 1)) as f64).powf(0.25);
    if !(rho > threshold) || !rho.is_finite() {
        return Err(Error::Precondition(format!(
            "rho = {rho} must exceed ((k-1)(l-1))^(1/4) = {threshold}"
        )));
    }
    let z1 = rho + (k - 1) as f64 / rho;
    let z2 = rho + (l - 1) as f64 / rho;
    let (ln_z1, ln_zz) = (z1.ln(), (z1 * z2).ln());
    let weight = |m: usize| {
        if m.is_multiple_of(2) {
            -ln_z1 - (m / 2) as f64 * ln_zz
        } else {
            -(m.div_ceil(2) as f64) * ln_zz
        }
    };
    let norm = ((k - 1) as f64).sqrt() + ((l - 1) as f64).sqrt();
    let s = (z1 * z2).sqrt();
    let ln_c = ln_tail_constant(b, norm.ln())?;
    let ln_w = (-ln_z1).max(-s.ln());
    let mut notes = Vec::new();
    if k == 2 && l == 2 {
        notes.push("degenerate: the (2,2) tree is a line".into());
    }
    Ok(Evaluation {
        b_terms: b_terms(b, weight),
        a_terms: a_terms(a, rho),
        tail: geometric_tail(ln_c, ln_w, norm / s, b.r_max()),
        params: vec![("k", k as f64), ("l", l as f64), ("rho", rho), ("z1", z1), ("z2", z2)],
        notes,
    })
}

fn judge(name: &str, eval: &Evaluation, parity: Option<usize>, scale: f64, rel_tol: f64) -> Result<IdentityReport> {
    let (lhs, rhs) = (eval.lhs(parity), eval.rhs(parity));
    let allowance = rel_tol * scale.abs();
    if eval.tail > allowance {
        return Err(Error::InsufficientTerms(format!(
            "{name}: tail bound {:e} exceeds {allowance:e} after {} terms",
            eval.tail,
            eval.b_terms.len()
        )));
    }
    let mut report = IdentityReport::new(name, &eval.params, lhs, rhs, (lhs - rhs).abs());
    report.notes = eval.notes.clone();
    Ok(report.judge(eval.b_terms.len(), eval.tail, allowance))
}

/// The regular-tree identity for `a`, `b` computed from the same `f` and root.
///
/// Fails with `InsufficientTerms` when the tail bound alone exceeds
/// `rel_tol * |rhs|`.
pub fn eval_regular_scalar_identity(
    a: &CountSeries,
    b: &CountSeries,
    d: usize,
    rho: f64,
    rel_tol: f64,
) -> Result<IdentityReport> {
    let eval = evaluate_regular(a, b, d, rho)?;
    judge("regular-scalar", &eval, None, eval.rhs(None), rel_tol)
}

/// Even- and odd-index halves of the regular identity, obtained by adding
/// and subtracting the identity at `-rho`. Tolerances are relative to the
/// full right-hand side, so a half that vanishes identically still passes.
pub fn eval_parity_identities(
    a: &CountSeries,
    b: &CountSeries,
    d: usize,
    rho: f64,
    rel_tol: f64,
) -> Result<(IdentityReport, IdentityReport)> {
    let eval = evaluate_regular(a, b, d, rho)?;
    let scale = eval.rhs(None);
    Ok((
        judge("regular-scalar-even", &eval, Some(0), scale, rel_tol)?,
        judge("regular-scalar-odd", &eval, Some(1), scale, rel_tol)?,
    ))
}

/// The bi-regular identity, root on side `U` of degree `k`.
pub fn eval_biregular_scalar_identity(
    a: &CountSeries,
    b: &CountSeries,
    k: usize,
    l: usize,
    rho: f64,
    rel_tol: f64,
) -> Result<IdentityReport> {
    let eval = evaluate_biregular(a, b, k, l, rho)?;
    judge("biregular-scalar", &eval, None, eval.rhs(None), rel_tol)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncationPoint {
    pub m: usize,
    pub lhs: f64,
    pub rhs: f64,
}

/// Both sides of the bi-regular identity for the truncations `f_m`,
/// `m = 0..=support radius`, using `b`-series of length `r_max + 1`.
pub fn truncation_sequence(
    k: usize,
    l: usize,
    f: &RadialProfile,
    rho: f64,
    r_max: usize,
) -> Result<Vec<TruncationPoint>> {
    let support = f
        .support_radius()
        .ok_or_else(|| Error::Precondition("f must be finitely supported".into()))?;
    let opts = CountOptions::default().log_only();
    (0..=support)
        .map(|m| {
            let fm = f.truncate(m);
            let a = radial_nbw_counts(k, l, &fm, support.max(1), &opts)?;
            let b = radial_walk_counts(k, l, &fm, r_max, &opts)?;
            let eval = evaluate_biregular(&a, &b, k, l, rho)?;
            Ok(TruncationPoint {
                m,
                lhs: eval.lhs(None),
                rhs: eval.rhs(None),
            })
        })
        .collect()
}
