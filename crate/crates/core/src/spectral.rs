//! Perron values of non-negative operators by power iteration.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Collatz–Wielandt bounds `(lo, hi)` on the Perron value of a non-negative
/// operator, refined by power iteration from the all-ones vector until
/// `hi - lo <= tol`.
///
/// For any positive `x`, `min_i (Mx)_i / x_i <= rho(M) <= max_i (Mx)_i / x_i`,
/// so both ends are rigorous up to rounding. Convergence needs `M` primitive
/// on the iterated coordinates.
pub fn perron_bounds<F>(apply: F, n: usize, tol: f64, max_iter: usize) -> Result<(f64, f64)>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    if n == 0 {
        return Ok((0.0, 0.0));
    }
    let mut x = vec![1.0 / n as f64; n];
    for _ in 0..max_iter {
        let y = apply(&x);
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for (yi, xi) in y.iter().zip(&x) {
            let ratio = yi / xi;
            lo = lo.min(ratio);
            hi = hi.max(ratio);
        }
        if hi - lo <= tol {
            return Ok((lo, hi));
        }
        let total: f64 = y.iter().sum();
        if total == 0.0 || !total.is_finite() {
            return Err(Error::NoConvergence(max_iter));
        }
        x = y.into_iter().map(|v| v / total).collect();
        if x.iter().any(|&v| v <= 0.0) {
            return Err(Error::NoConvergence(max_iter));
        }
    }
    Err(Error::NoConvergence(max_iter))
}

/// Upper bound on `||A||`, the largest adjacency eigenvalue of `g`, within
/// `tol` of the true value.
///
/// Iterates `A + I` on each connected component separately so every run is
/// primitive, including bipartite components.
pub fn adjacency_norm(g: &Graph, tol: f64, max_iter: usize) -> Result<f64> {
    let n = g.vertex_count();
    let mut component = vec![usize::MAX; n];
    let mut best = 0.0f64;
    for start in 0..n {
        if component[start] != usize::MAX {
            continue;
        }
        let mut members = vec![start];
        component[start] = start;
        let mut i = 0;
        while i < members.len() {
            for &w in g.neighbors(members[i]) {
                if component[w] == usize::MAX {
                    component[w] = start;
                    members.push(w);
                }
            }
            i += 1;
        }
        let local: std::collections::HashMap<usize, usize> = members.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let apply = |x: &[f64]| -> Vec<f64> {
            members
                .iter()
                .enumerate()
                .map(|(i, &v)| x[i] + g.neighbors(v).iter().map(|w| x[local[w]]).sum::<f64>())
                .collect()
        };
        let (_, hi) = perron_bounds(apply, members.len(), tol, max_iter)?;
        best = best.max(hi - 1.0);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_bipartite, complete_graph, cycle_graph, path_graph};

    #[test]
    fn adjacency_norms() {
        let k4 = complete_graph(4).unwrap();
        assert!((adjacency_norm(&k4, 1e-12, 1000).unwrap() - 3.0).abs() < 1e-12);
        let k34 = complete_bipartite(3, 4).unwrap();
        assert!((adjacency_norm(&k34, 1e-12, 1000).unwrap() - 12f64.sqrt()).abs() < 1e-10);
        let c6 = cycle_graph(6).unwrap();
        assert!((adjacency_norm(&c6, 1e-12, 1000).unwrap() - 2.0).abs() < 1e-12);
        let p2 = path_graph(2).unwrap();
        assert!((adjacency_norm(&p2, 1e-12, 1000).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn disconnected_takes_largest_component() {
        let g = Graph::build(5, &[(0, 1), (2, 3), (3, 4), (2, 4)], None).unwrap();
        assert!((adjacency_norm(&g, 1e-12, 1000).unwrap() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn bounds_bracket() {
        let apply = |x: &[f64]| vec![2.0 * x[0] + x[1], x[0] + 2.0 * x[1] + x[1]];
        let (lo, hi) = perron_bounds(apply, 2, 1e-12, 10_000).unwrap();
        let rho = (5.0 + 5f64.sqrt()) / 2.0;
        assert!(lo <= rho + 1e-12 && rho <= hi + 1e-12);
    }
}
