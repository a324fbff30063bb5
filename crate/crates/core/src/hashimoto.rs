//! The non-backtracking (Hashimoto) operator `B` on directed edges, together
//! with the incidence operators `S` and `E` that give
//! `A_{r+1} = S B^r E`.
//!
//! Directed edges are indexed from the canonical edge list: the edge of rank
//! `m` is `(u, v)` with `u < v` at index `2m` and `(v, u)` at `2m + 1`, so the
//! reversal of `e` is `e ^ 1`.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::Zero;

use crate::ball::ball_size;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scaled::Scaled;
use crate::spectral::perron_bounds;
use crate::walks::enumerate::DEFAULT_WORK_CAP;

#[derive(Clone, Debug)]
pub struct DirectedEdgeSpace {
    vertex_count: usize,
    starts: Vec<usize>,
    ends: Vec<usize>,
    successors: Vec<Vec<usize>>,
    leaving: Vec<Vec<usize>>,
    connected: bool,
}

impl DirectedEdgeSpace {
    pub fn len(&self) -> usize {
        self.starts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.starts.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn start(&self, e: usize) -> usize {
        self.starts[e]
    }

    pub fn end(&self, e: usize) -> usize {
        self.ends[e]
    }

    pub fn reversal(&self, e: usize) -> usize {
        e ^ 1
    }

    /// Edges `e` with `e0 -> e`: they leave `end(e0)` and do not return along `e0`.
    pub fn successors(&self, e0: usize) -> &[usize] {
        &self.successors[e0]
    }

    pub fn out_degree(&self, e0: usize) -> usize {
        self.successors[e0].len()
    }

    /// Directed edges starting at `v`.
    pub fn leaving(&self, v: usize) -> &[usize] {
        &self.leaving[v]
    }

    fn check_aligned(&self, len: usize) -> Result<()> {
        if len == self.len() {
            Ok(())
        } else {
            Err(Error::MisalignedVector {
                expected: self.len(),
                got: len,
            })
        }
    }
}

pub fn directed_edge_space(g: &Graph) -> DirectedEdgeSpace {
    let edges = g.edges();
    let n = g.vertex_count();
    let mut starts = Vec::with_capacity(2 * edges.len());
    let mut ends = Vec::with_capacity(2 * edges.len());
    for &(u, v) in &edges {
        starts.extend([u, v]);
        ends.extend([v, u]);
    }
    let mut leaving = vec![Vec::new(); n];
    for (e, &s) in starts.iter().enumerate() {
        leaving[s].push(e);
    }
    let successors = (0..starts.len())
        .map(|e0| leaving[ends[e0]].iter().copied().filter(|&e| e != e0 ^ 1).collect())
        .collect();
    DirectedEdgeSpace {
        vertex_count: n,
        starts,
        ends,
        successors,
        leaving,
        connected: g.is_connected(),
    }
}

/// `(Bx)(e0) = sum over e0 -> e of x(e)`.
pub fn hashimoto_apply(space: &DirectedEdgeSpace, x: &[f64]) -> Result<Vec<f64>> {
    space.check_aligned(x.len())?;
    Ok(space
        .successors
        .iter()
        .map(|succ| succ.iter().map(|&e| x[e]).sum())
        .collect())
}

fn hashimoto_apply_exact(space: &DirectedEdgeSpace, x: &[BigInt]) -> Vec<BigInt> {
    space
        .successors
        .iter()
        .map(|succ| succ.iter().fold(BigInt::zero(), |acc, &e| acc + &x[e]))
        .collect()
}

/// `A_{r+1}` as an exact matrix, `m[i][j]` the number of non-backtracking
/// walks of length `r + 1` from `i` to `j`, computed column by column as
/// `S B^r E delta_j`.
pub fn nbw_via_hashimoto(g: &Graph, r: usize) -> Result<Vec<Vec<BigInt>>> {
    nbw_via_hashimoto_with_cap(g, r, DEFAULT_WORK_CAP)
}

pub fn nbw_via_hashimoto_with_cap(g: &Graph, r: usize, cap: u64) -> Result<Vec<Vec<BigInt>>> {
    let space = directed_edge_space(g);
    let n = g.vertex_count();
    let work = (n as u64)
        .saturating_mul(r as u64 + 1)
        .saturating_mul(space.len() as u64);
    if work > cap {
        return Err(Error::WorkCapExceeded { cap });
    }
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for j in 0..n {
        let mut x: Vec<BigInt> = space.ends.iter().map(|&end| BigInt::from((end == j) as u8)).collect();
        for _ in 0..r {
            x = hashimoto_apply_exact(&space, &x);
        }
        for (i, row) in out.iter_mut().enumerate() {
            row[j] = space.leaving[i].iter().fold(BigInt::zero(), |acc, &e| acc + &x[e]);
        }
    }
    Ok(out)
}

/// `S`, vertices by directed edges: `S[v][e] = 1` when `e` starts at `v`.
pub fn start_incidence(space: &DirectedEdgeSpace) -> DMatrix<f64> {
    DMatrix::from_fn(space.vertex_count, space.len(), |v, e| {
        (space.starts[e] == v) as u8 as f64
    })
}

/// `E`, directed edges by vertices: `E[e][v] = 1` when `e` ends at `v`.
pub fn end_incidence(space: &DirectedEdgeSpace) -> DMatrix<f64> {
    DMatrix::from_fn(space.len(), space.vertex_count, |e, v| {
        (space.ends[e] == v) as u8 as f64
    })
}

pub fn hashimoto_matrix(space: &DirectedEdgeSpace) -> DMatrix<f64> {
    let mut b = DMatrix::zeros(space.len(), space.len());
    for (e0, succ) in space.successors.iter().enumerate() {
        for &e in succ {
            b[(e0, e)] = 1.0;
        }
    }
    b
}

/// Perron value of `B` on a connected finite graph with minimum degree 2.
///
/// Power iteration runs on `I + B`, which is primitive whenever `B` is
/// irreducible, so bipartite graphs need no special casing. The result is
/// the midpoint of Collatz–Wielandt bounds at most `tol` apart.
pub fn hashimoto_spectral_radius_finite(space: &DirectedEdgeSpace, tol: f64, max_iter: usize) -> Result<f64> {
    if !space.connected {
        return Err(Error::Disconnected);
    }
    if space.is_empty() || space.successors.iter().any(Vec::is_empty) {
        return Err(Error::Precondition("minimum degree must be at least 2".into()));
    }
    let apply = |x: &[f64]| -> Vec<f64> {
        space
            .successors
            .iter()
            .enumerate()
            .map(|(e0, succ)| x[e0] + succ.iter().map(|&e| x[e]).sum::<f64>())
            .collect()
    };
    let (lo, hi) = perron_bounds(apply, space.len(), tol, max_iter)?;
    Ok((lo + hi) / 2.0 - 1.0)
}

/// `(r, sqrt(|B(v, r)|^{1/r}))` for `r = 1..=r_max` on the `(k, l)` tree,
/// tending to `((k-1)(l-1))^{1/4}`.
pub fn tree_ball_growth_rate(k: usize, l: usize, r_max: usize) -> Result<Vec<(usize, f64)>> {
    crate::ball::check_tree_degrees(k, l)?;
    Ok((1..=r_max)
        .map(|r| {
            let ln_ball = Scaled::from_biguint(&ball_size(k, l, r)).ln();
            (r, (ln_ball / (2.0 * r as f64)).exp())
        })
        .collect())
}

pub fn tree_hashimoto_radius(k: usize, l: usize) -> f64 {
    (((k - 1) * (l - 1)) as f64).powf(0.25)
}
