//! Exact walk and non-backtracking walk counts on finite graphs by repeated
//! sparse application of the adjacency matrix to `delta_e`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::function::VertexFunction;
use crate::graph::Graph;
use crate::scaled::Scaled;
use crate::walks::series::{CountEntry, CountSeries, NormProfile, SeriesKind, DEFAULT_LOG_THRESHOLD_BITS};

#[derive(Clone, Debug, PartialEq)]
pub struct CountOptions {
    /// Largest `r` for which values on this arena equal those of the infinite
    /// tree it models (the ball radius); `None` for an honest finite graph.
    pub horizon: Option<usize>,
    /// Permit `r_max` past the horizon; such entries are flagged.
    pub allow_truncated: bool,
    /// Keep exact rationals when the function is exact.
    pub exact: bool,
    pub log_threshold_bits: u64,
}

impl Default for CountOptions {
    fn default() -> CountOptions {
        CountOptions {
            horizon: None,
            allow_truncated: false,
            exact: true,
            log_threshold_bits: DEFAULT_LOG_THRESHOLD_BITS,
        }
    }
}

impl CountOptions {
    /// Options for a radius-`radius` ball counted from its centre.
    pub fn on_ball(radius: usize) -> CountOptions {
        CountOptions {
            horizon: Some(radius),
            ..CountOptions::default()
        }
    }

    pub fn truncated(mut self) -> CountOptions {
        self.allow_truncated = true;
        self
    }

    pub fn log_only(mut self) -> CountOptions {
        self.exact = false;
        self
    }

    pub(crate) fn check_horizon(&self, r_max: usize) -> Result<()> {
        match self.horizon {
            Some(radius) if r_max > radius && !self.allow_truncated => Err(Error::BeyondHorizon { r_max, radius }),
            _ => Ok(()),
        }
    }

    pub(crate) fn within_horizon(&self, r: usize) -> bool {
        self.horizon.is_none_or(|radius| r <= radius)
    }
}

/// `(A u)(j) = sum of u(i) over neighbours i of j`.
pub fn apply_adjacency(g: &Graph, u: &[BigInt]) -> Vec<BigInt> {
    (0..g.vertex_count())
        .map(|j| g.neighbors(j).iter().map(|&i| &u[i]).sum())
        .collect()
}

/// A count vector held in machine words until a step would overflow.
enum Vector {
    Small(Vec<u64>),
    Big(Vec<BigInt>),
}

impl Vector {
    fn delta(n: usize, e: usize) -> Vector {
        let mut v = vec![0; n];
        v[e] = 1;
        Vector::Small(v)
    }

    fn to_big(&self) -> Vec<BigInt> {
        match self {
            Vector::Small(v) => v.iter().map(|&x| BigInt::from(x)).collect(),
            Vector::Big(v) => v.clone(),
        }
    }

    fn is_zero_at(&self, j: usize) -> bool {
        match self {
            Vector::Small(v) => v[j] == 0,
            Vector::Big(v) => v[j].is_zero(),
        }
    }
}

/// Vertices in breadth-first order from the base, so that the entries a
/// length-`r` vector can touch form a prefix.
struct Reach {
    order: Vec<usize>,
    /// Distance from the base, `usize::MAX` when unreachable.
    dist: Vec<usize>,
    /// `upto[r]` vertices lie within distance `r`.
    upto: Vec<usize>,
}

impl Reach {
    fn new(g: &Graph, e: usize) -> Reach {
        let mut dist = vec![usize::MAX; g.vertex_count()];
        let mut order = vec![e];
        let mut upto = vec![];
        dist[e] = 0;
        let mut head = 0;
        while head < order.len() {
            let u = order[head];
            head += 1;
            if dist[u] == upto.len() {
                upto.push(head - 1);
            }
            for &v in g.neighbors(u) {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    order.push(v);
                }
            }
        }
        // upto[r] currently holds the first index at distance r
        upto.remove(0);
        upto.push(order.len());
        Reach { order, dist, upto }
    }

    fn within(&self, r: usize) -> &[usize] {
        &self.order[..self.upto[r.min(self.upto.len() - 1)]]
    }
}

/// `A cur - shift(j) prev` entrywise.
/// Only `active` entries are computed; the rest are known to vanish.
fn step(g: &Graph, active: &[usize], cur: &Vector, prev: Option<&Vector>, shift: impl Fn(usize) -> usize) -> Vector {
    let n = g.vertex_count();
    let small_prev = match prev {
        None => Some(None),
        Some(Vector::Small(p)) => Some(Some(p)),
        Some(Vector::Big(_)) => None,
    };
    if let (Vector::Small(c), Some(p)) = (cur, small_prev) {
        let entry = |j: usize| -> Option<u64> {
            let sum = g.neighbors(j).iter().try_fold(0u64, |acc, &i| acc.checked_add(c[i]))?;
            match p {
                Some(p) if p[j] != 0 => sum.checked_sub(p[j].checked_mul(shift(j) as u64)?),
                _ => Some(sum),
            }
        };
        let mut next = vec![0; n];
        let fits = active.iter().all(|&j| match entry(j) {
            Some(x) => {
                next[j] = x;
                true
            }
            None => false,
        });
        if fits {
            return Vector::Small(next);
        }
    }
    let c = cur.to_big();
    let p = prev.map(Vector::to_big);
    let mut next = vec![BigInt::zero(); n];
    for &j in active {
        let mut x: BigInt = g.neighbors(j).iter().map(|&i| &c[i]).sum();
        if let Some(p) = &p {
            let k = shift(j);
            if k != 0 && !p[j].is_zero() {
                x -= &p[j] * BigInt::from(k);
            }
        }
        next[j] = x;
    }
    Vector::Big(next)
}

fn for_each_walk_vector(g: &Graph, reach: &Reach, e: usize, r_max: usize, mut visit: impl FnMut(usize, &Vector)) {
    let mut u = Vector::delta(g.vertex_count(), e);
    visit(0, &u);
    for r in 1..=r_max {
        u = step(g, reach.within(r), &u, None, |_| 0);
        visit(r, &u);
    }
}

/// Runs `u_0 = delta_e`, `u_1 = A u_0`, `u_2 = A u_1 - D u_0`,
/// `u_{r+1} = A u_r - (D - I) u_{r-1}`, so that `u_r = A_r delta_e`.
fn for_each_nbw_vector(g: &Graph, reach: &Reach, e: usize, r_max: usize, mut visit: impl FnMut(usize, &Vector)) {
    let mut prev = Vector::delta(g.vertex_count(), e);
    visit(0, &prev);
    if r_max == 0 {
        return;
    }
    let mut cur = step(g, reach.within(1), &prev, None, |_| 0);
    visit(1, &cur);
    for r in 1..r_max {
        let next = if r == 1 {
            step(g, reach.within(2), &cur, Some(&prev), |j| g.degree(j))
        } else {
            step(g, reach.within(r + 1), &cur, Some(&prev), |j| {
                g.degree(j).saturating_sub(1)
            })
        };
        visit(r + 1, &next);
        prev = std::mem::replace(&mut cur, next);
    }
}

/// `A^r delta_e` for `r = 0..=r_max`: entry `j` counts walks from `e` to `j`.
pub fn walk_vectors(g: &Graph, e: usize, r_max: usize) -> Result<Vec<Vec<BigInt>>> {
    g.check_vertex(e)?;
    let mut out = Vec::with_capacity(r_max + 1);
    for_each_walk_vector(g, &Reach::new(g, e), e, r_max, |_, u| out.push(u.to_big()));
    Ok(out)
}

/// `A_r delta_e` for `r = 0..=r_max`: entry `j` counts non-backtracking walks
/// from `e` to `j`.
pub fn nbw_vectors(g: &Graph, e: usize, r_max: usize) -> Result<Vec<Vec<BigInt>>> {
    g.check_vertex(e)?;
    let mut out = Vec::with_capacity(r_max + 1);
    for_each_nbw_vector(g, &Reach::new(g, e), e, r_max, |_, u| out.push(u.to_big()));
    Ok(out)
}

/// A function prepared for repeated pairing against integer count vectors.
enum Pairing {
    /// `f_j = numerators[j] / denominator`.
    Exact {
        support: Vec<(usize, BigInt)>,
        denominator: BigInt,
    },
    Real {
        support: Vec<(usize, Scaled)>,
    },
}

impl Pairing {
    fn new(f: &VertexFunction, exact: bool) -> Pairing {
        if exact && f.is_exact() {
            let rationals: Vec<(usize, &BigRational)> = f
                .values()
                .iter()
                .enumerate()
                .filter(|(_, w)| !w.is_zero())
                .map(|(j, w)| (j, w.as_exact().unwrap()))
                .collect();
            let denominator = rationals.iter().fold(BigInt::one(), |acc, (_, q)| acc.lcm(q.denom()));
            let support = rationals
                .into_iter()
                .map(|(j, q)| (j, q.numer() * (&denominator / q.denom())))
                .collect();
            Pairing::Exact { support, denominator }
        } else {
            Pairing::Real {
                support: f
                    .values()
                    .iter()
                    .enumerate()
                    .filter(|(_, w)| !w.is_zero())
                    .map(|(j, w)| (j, w.to_scaled()))
                    .collect(),
            }
        }
    }

    fn pair(&self, u: &Vector, threshold_bits: u64, within_horizon: bool) -> CountEntry {
        match self {
            Pairing::Exact { support, denominator } => {
                let numer: BigInt = match u {
                    Vector::Small(u) => support.iter().filter(|(j, _)| u[*j] != 0).map(|(j, c)| c * u[*j]).sum(),
                    Vector::Big(u) => support.iter().map(|(j, c)| &u[*j] * c).sum(),
                };
                CountEntry::from_exact(
                    BigRational::new(numer, denominator.clone()),
                    threshold_bits,
                    within_horizon,
                )
            }
            Pairing::Real { support } => {
                let total = support
                    .iter()
                    .filter(|(j, _)| !u.is_zero_at(*j))
                    .map(|(j, w)| {
                        let x = match u {
                            Vector::Small(u) => Scaled::from_f64(u[*j] as f64),
                            Vector::Big(u) => Scaled::from_bigint(&u[*j]),
                        };
                        x * *w
                    })
                    .sum();
                CountEntry::from_scaled(total, within_horizon)
            }
        }
    }
}

fn support_radius(g: &Graph, reach: &Reach, f: &VertexFunction) -> Option<usize> {
    if g.edge_count() + 1 != g.vertex_count() || reach.order.len() != g.vertex_count() {
        return None;
    }
    Some(f.support().into_iter().map(|v| reach.dist[v]).max().unwrap_or(0))
}

fn l2_norm_ln(f: &VertexFunction) -> f64 {
    let sq: Scaled = f
        .values()
        .iter()
        .filter(|w| !w.is_zero())
        .map(|w| {
            let s = w.to_scaled();
            s * s
        })
        .sum();
    sq.sqrt().ln()
}

fn counts(
    kind: SeriesKind,
    g: &Graph,
    e: usize,
    f: &VertexFunction,
    r_max: usize,
    opts: &CountOptions,
) -> Result<CountSeries> {
    g.check_vertex(e)?;
    f.check_aligned(g)?;
    opts.check_horizon(r_max)?;
    let pairing = Pairing::new(f, opts.exact);
    let reach = Reach::new(g, e);
    let mut entries = Vec::with_capacity(r_max + 1);
    let mut visit = |r: usize, u: &Vector| {
        entries.push(pairing.pair(u, opts.log_threshold_bits, opts.within_horizon(r)));
    };
    match kind {
        SeriesKind::Walk => for_each_walk_vector(g, &reach, e, r_max, &mut visit),
        SeriesKind::NonBacktracking => for_each_nbw_vector(g, &reach, e, r_max, &mut visit),
    }
    let norms = (kind == SeriesKind::Walk).then(|| NormProfile {
        ln_f: vec![l2_norm_ln(f)],
        ln_root: vec![0.0],
    });
    Ok(CountSeries {
        kind,
        base: e,
        provenance: format!(
            "graph(n={}, m={}){}",
            g.vertex_count(),
            g.edge_count(),
            opts.horizon.map(|r| format!(" ball R={r}")).unwrap_or_default()
        ),
        entries,
        support_radius: support_radius(g, &reach, f),
        norms,
    })
}

/// `b_r(f) = <f, A^r delta_e>` for `r = 0..=r_max`.
pub fn walk_counts(g: &Graph, e: usize, f: &VertexFunction, r_max: usize, opts: &CountOptions) -> Result<CountSeries> {
    counts(SeriesKind::Walk, g, e, f, r_max, opts)
}

/// `a_r(f) = <f, A_r delta_e>` for `r = 0..=r_max`.
///
/// Degrees are the realised degrees of `g`; on a tree ball they agree with
/// the tree's degrees on every vertex a walk of length `r <= R` can use.
pub fn nbw_counts(g: &Graph, e: usize, f: &VertexFunction, r_max: usize, opts: &CountOptions) -> Result<CountSeries> {
    counts(SeriesKind::NonBacktracking, g, e, f, r_max, opts)
}
