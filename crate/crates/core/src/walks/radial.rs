//! Walk counts on the infinite `(k, l)`-bi-regular tree for radial weights.
//!
//! For a radial `f` only the total number of walks ending in each sphere
//! matters. With `w_r(n)` that total for walks of length `r`,
//!
//! ```text
//! w_{r+1}(n) = w_r(n-1) * children(n-1) + w_r(n+1)
//! ```
//!
//! where `children(0) = k` and `children(n) = deg(n) - 1` otherwise, and
//! `b_r(f) = sum_n w_r(n) f(n)`. This is `O(r_max^2)` work instead of the
//! exponential cost of materialising a ball.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::ball::{check_tree_degrees, tree_degree};
use crate::error::Result;
use crate::function::RadialProfile;
use crate::scaled::Scaled;
use crate::walks::engine::CountOptions;
use crate::walks::series::{CountEntry, CountSeries, NormProfile, SeriesKind};
use crate::weight::Weight;

fn children(k: usize, l: usize, n: usize) -> usize {
    if n == 0 {
        k
    } else {
        tree_degree(k, l, n) - 1
    }
}

/// Exact rational weights `f(n)` brought to integer form on demand.
enum ExactWeights {
    /// `f(n) = numerators[n] / denominator`, zero past the end.
    Finite {
        numerators: Vec<BigInt>,
        denominator: BigInt,
    },
    /// `f(n) = (p / q)^n`; powers are cached as they are needed.
    Geometric { p_pow: Vec<BigInt>, q_pow: Vec<BigInt> },
}

impl ExactWeights {
    fn new(f: &RadialProfile) -> Option<ExactWeights> {
        match f {
            RadialProfile::Explicit(values) => {
                let qs: Vec<&BigRational> = values.iter().map(Weight::as_exact).collect::<Option<_>>()?;
                let denominator = qs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
                let numerators = qs.iter().map(|q| q.numer() * (&denominator / q.denom())).collect();
                Some(ExactWeights::Finite {
                    numerators,
                    denominator,
                })
            }
            RadialProfile::Geometric(c) => {
                let c = c.as_exact()?;
                Some(ExactWeights::Geometric {
                    p_pow: vec![BigInt::one(), c.numer().clone()],
                    q_pow: vec![BigInt::one(), c.denom().clone()],
                })
            }
        }
    }

    fn grow(pows: &mut Vec<BigInt>, upto: usize) {
        while pows.len() <= upto {
            let next = pows.last().unwrap() * &pows[1];
            pows.push(next);
        }
    }

    /// `sum_n shells[n] f(n)`, with `shells` indexed by distance.
    fn pair(&mut self, shells: &[BigInt]) -> BigRational {
        match self {
            ExactWeights::Finite {
                numerators,
                denominator,
            } => {
                let numer: BigInt = shells
                    .iter()
                    .zip(numerators.iter())
                    .filter(|(w, _)| !w.is_zero())
                    .map(|(w, c)| w * c)
                    .sum();
                BigRational::new(numer, denominator.clone())
            }
            ExactWeights::Geometric { p_pow, q_pow } => {
                let top = shells.len() - 1;
                ExactWeights::grow(p_pow, top);
                ExactWeights::grow(q_pow, top);
                let numer: BigInt = shells
                    .iter()
                    .enumerate()
                    .filter(|(_, w)| !w.is_zero())
                    .map(|(n, w)| w * &p_pow[n] * &q_pow[top - n])
                    .sum();
                BigRational::new(numer, q_pow[top].clone())
            }
        }
    }

    fn value(&mut self, n: usize) -> BigRational {
        match self {
            ExactWeights::Finite {
                numerators,
                denominator,
            } => match numerators.get(n) {
                Some(c) => BigRational::new(c.clone(), denominator.clone()),
                None => BigRational::zero(),
            },
            ExactWeights::Geometric { p_pow, q_pow } => {
                ExactWeights::grow(p_pow, n);
                ExactWeights::grow(q_pow, n);
                BigRational::new(p_pow[n].clone(), q_pow[n].clone())
            }
        }
    }
}

/// `f(n)` as [`Scaled`] values, extended on demand.
struct ScaledWeights<'a> {
    profile: &'a RadialProfile,
    cache: Vec<Scaled>,
}

impl<'a> ScaledWeights<'a> {
    fn new(profile: &'a RadialProfile) -> ScaledWeights<'a> {
        ScaledWeights {
            profile,
            cache: Vec::new(),
        }
    }

    fn get(&mut self, n: usize) -> Scaled {
        while self.cache.len() <= n {
            let m = self.cache.len();
            let next = match self.profile {
                RadialProfile::Explicit(v) => v.get(m).map_or(Scaled::ZERO, Weight::to_scaled),
                RadialProfile::Geometric(c) => match self.cache.last() {
                    Some(prev) => *prev * c.to_scaled(),
                    None => Scaled::ONE,
                },
            };
            self.cache.push(next);
        }
        self.cache[n]
    }
}

fn max_bits(v: &[BigInt]) -> u64 {
    v.iter().map(BigInt::bits).max().unwrap_or(0)
}

/// Sphere sizes `|S(n)|` for `n <= upto` as [`Scaled`].
fn scaled_spheres(k: usize, l: usize, upto: usize) -> Vec<Scaled> {
    let mut out = Vec::with_capacity(upto + 1);
    let mut s = Scaled::ONE;
    for n in 0..=upto {
        out.push(s);
        s = s.scale(children(k, l, n) as f64);
    }
    out
}

/// `ln ||A^p f||_2` for `p = 0..=p_max`, with `f` finitely supported and
/// radial. Radial vectors here hold the per-vertex value on each sphere.
fn radial_power_norms(k: usize, l: usize, f: &RadialProfile, support: usize, p_max: usize) -> Vec<f64> {
    let spheres = scaled_spheres(k, l, support + p_max + 1);
    let mut h: Vec<Scaled> = (0..=support).map(|n| f.value(n).to_scaled()).collect();
    let norm = |h: &[Scaled]| -> f64 {
        let sq: Scaled = h.iter().zip(&spheres).map(|(x, s)| *x * *x * *s).sum();
        sq.sqrt().ln()
    };
    let mut out = vec![norm(&h)];
    for _ in 0..p_max {
        let len = h.len() + 1;
        let mut next = vec![Scaled::ZERO; len];
        for (n, slot) in next.iter_mut().enumerate() {
            let up = h.get(n + 1).copied().unwrap_or(Scaled::ZERO);
            *slot = if n == 0 {
                up.scale(k as f64)
            } else {
                let down = h.get(n - 1).copied().unwrap_or(Scaled::ZERO);
                down + up.scale((tree_degree(k, l, n) - 1) as f64)
            };
        }
        h = next;
        out.push(norm(&h));
    }
    out
}

/// `b_r(f)` on the `(k, l)` tree, root on side `U`, for `r = 0..=r_max`.
///
/// Exact while `opts.exact` holds, `f` is exact and values stay under
/// `opts.log_threshold_bits`; log-space from then on.
pub fn radial_walk_counts(
    k: usize,
    l: usize,
    f: &RadialProfile,
    r_max: usize,
    opts: &CountOptions,
) -> Result<CountSeries> {
    check_tree_degrees(k, l)?;
    let threshold = opts.log_threshold_bits;
    let mut exact_weights = if opts.exact { ExactWeights::new(f) } else { None };
    let mut scaled_weights = ScaledWeights::new(f);
    let support = f.support_radius();
    let norm_depth = support.map(|_| r_max / 2);
    let spheres = norm_depth.map(|q| scaled_spheres(k, l, q));
    let mut ln_root = Vec::new();

    let mut exact_shells: Option<Vec<BigInt>> = exact_weights.as_ref().map(|_| vec![BigInt::one()]);
    let mut shells: Vec<Scaled> = vec![Scaled::ONE];
    let mut entries = Vec::with_capacity(r_max + 1);

    for r in 0..=r_max {
        if let Some(w) = &exact_shells {
            let mut entry = None;
            if max_bits(w) <= threshold {
                let value = exact_weights.as_mut().unwrap().pair(w);
                if value.numer().bits().max(value.denom().bits()) <= threshold {
                    entry = Some(CountEntry::from_exact(value, threshold, true));
                }
            }
            match entry {
                Some(e) => entries.push(e),
                None => {
                    shells = w.iter().map(Scaled::from_bigint).collect();
                    exact_shells = None;
                    exact_weights = None;
                }
            }
        }
        if exact_shells.is_none() {
            let total: Scaled = shells
                .iter()
                .enumerate()
                .skip(r % 2)
                .step_by(2)
                .map(|(n, w)| *w * scaled_weights.get(n))
                .sum();
            entries.push(CountEntry::from_scaled(total, true));
        }

        if let (Some(q_max), Some(spheres)) = (norm_depth, &spheres) {
            if r <= q_max {
                let sq: Scaled = match &exact_shells {
                    Some(w) => w
                        .iter()
                        .zip(spheres)
                        .map(|(x, s)| {
                            let x = Scaled::from_bigint(x);
                            x * x / *s
                        })
                        .sum(),
                    None => shells.iter().zip(spheres).map(|(x, s)| *x * *x / *s).sum(),
                };
                ln_root.push(sq.sqrt().ln());
            }
        }

        if r == r_max {
            break;
        }
        match &mut exact_shells {
            Some(w) => {
                let mut next = vec![BigInt::zero(); r + 2];
                for (n, slot) in next.iter_mut().enumerate() {
                    if n >= 1 && !w[n - 1].is_zero() {
                        *slot += &w[n - 1] * BigInt::from(children(k, l, n - 1));
                    }
                    if let Some(up) = w.get(n + 1) {
                        *slot += up;
                    }
                }
                *w = next;
            }
            None => {
                let mut next = vec![Scaled::ZERO; r + 2];
                for (n, slot) in next.iter_mut().enumerate() {
                    let mut acc = Scaled::ZERO;
                    if n >= 1 {
                        acc = shells[n - 1].scale(children(k, l, n - 1) as f64);
                    }
                    if let Some(up) = shells.get(n + 1) {
                        acc += *up;
                    }
                    *slot = acc;
                }
                shells = next;
            }
        }
    }

    let norms = match (support, norm_depth) {
        (Some(s), Some(p_max)) => Some(NormProfile {
            ln_f: radial_power_norms(k, l, f, s, p_max),
            ln_root,
        }),
        _ => None,
    };
    Ok(CountSeries {
        kind: SeriesKind::Walk,
        base: 0,
        provenance: format!("radial ({k},{l}) tree"),
        entries,
        support_radius: support,
        norms,
    })
}

/// `a_r(f)` on the `(k, l)` tree: each sphere point has exactly one
/// non-backtracking walk from the root, so `a_r(f) = |S(r)| f(r)`.
pub fn radial_nbw_counts(
    k: usize,
    l: usize,
    f: &RadialProfile,
    r_max: usize,
    opts: &CountOptions,
) -> Result<CountSeries> {
    check_tree_degrees(k, l)?;
    let threshold = opts.log_threshold_bits;
    let mut exact_weights = if opts.exact { ExactWeights::new(f) } else { None };
    let mut sphere = BigUint::one();
    let mut ln_sphere = 0.0f64;
    let mut entries = Vec::with_capacity(r_max + 1);
    for r in 0..=r_max {
        let mut entry = None;
        if let Some(weights) = exact_weights.as_mut() {
            if sphere.bits() <= threshold {
                let value = BigRational::from_integer(BigInt::from(sphere.clone())) * weights.value(r);
                if value.numer().bits().max(value.denom().bits()) <= threshold {
                    entry = Some(CountEntry::from_exact(value, threshold, true));
                }
            }
            if entry.is_none() {
                exact_weights = None;
            }
        }
        entries.push(entry.unwrap_or_else(|| {
            let ln_f = f.ln_value(r);
            CountEntry {
                exact: None,
                log_value: if ln_f == f64::NEG_INFINITY {
                    ln_f
                } else {
                    ln_sphere + ln_f
                },
                within_horizon: true,
            }
        }));
        let c = children(k, l, r);
        if exact_weights.is_some() {
            sphere *= BigUint::from(c);
        }
        ln_sphere += (c as f64).ln();
    }
    Ok(CountSeries {
        kind: SeriesKind::NonBacktracking,
        base: 0,
        provenance: format!("radial ({k},{l}) tree"),
        entries,
        support_radius: f.support_radius(),
        norms: None,
    })
}
