//! Brute-force walk enumeration. These are the oracles the algebraic engines
//! are checked against, so they deliberately walk every path one step at a
//! time instead of multiplying anything.

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const DEFAULT_WORK_CAP: u64 = 100_000_000;

fn check_work(g: &Graph, r: usize, cap: u64) -> Result<()> {
    let mut work = g.vertex_count().max(1) as u64;
    for _ in 0..r {
        work = work.saturating_mul(g.max_degree().max(1) as u64);
        if work > cap {
            return Err(Error::WorkCapExceeded { cap });
        }
    }
    Ok(())
}

/// `count[j]` = number of length-`r` walks from `e` to `j`.
pub fn enumerate_walks(g: &Graph, e: usize, r: usize) -> Result<Vec<u64>> {
    enumerate_walks_with_cap(g, e, r, DEFAULT_WORK_CAP)
}

pub fn enumerate_walks_with_cap(g: &Graph, e: usize, r: usize, cap: u64) -> Result<Vec<u64>> {
    g.check_vertex(e)?;
    check_work(g, r, cap)?;
    let mut counts = vec![0u64; g.vertex_count()];
    fn step(g: &Graph, at: usize, left: usize, counts: &mut [u64]) {
        if left == 0 {
            counts[at] += 1;
            return;
        }
        for &next in g.neighbors(at) {
            step(g, next, left - 1, counts);
        }
    }
    step(g, e, r, &mut counts);
    Ok(counts)
}

/// `count[j]` = number of length-`r` non-backtracking walks from `e` to `j`.
pub fn enumerate_nbw(g: &Graph, e: usize, r: usize) -> Result<Vec<u64>> {
    enumerate_nbw_with_cap(g, e, r, DEFAULT_WORK_CAP)
}

pub fn enumerate_nbw_with_cap(g: &Graph, e: usize, r: usize, cap: u64) -> Result<Vec<u64>> {
    g.check_vertex(e)?;
    check_work(g, r, cap)?;
    let mut counts = vec![0u64; g.vertex_count()];
    fn step(g: &Graph, at: usize, from: Option<usize>, left: usize, counts: &mut [u64]) {
        if left == 0 {
            counts[at] += 1;
            return;
        }
        for &next in g.neighbors(at) {
            if Some(next) != from {
                step(g, next, Some(at), left - 1, counts);
            }
        }
    }
    step(g, e, None, r, &mut counts);
    Ok(counts)
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;
    use crate::ball::TreeBall;
    use crate::graph::{complete_bipartite, cycle_graph};

    #[test]
    fn length_zero_is_delta() {
        let g = cycle_graph(5).unwrap();
        assert_eq!(enumerate_walks(&g, 2, 0).unwrap(), vec![0, 0, 1, 0, 0]);
        assert_eq!(enumerate_nbw(&g, 2, 0).unwrap(), vec![0, 0, 1, 0, 0]);
    }

    #[test]
    fn small_counts() {
        let c4 = cycle_graph(4).unwrap();
        assert_eq!(enumerate_walks(&c4, 0, 2).unwrap()[0], 2);
        let ball = TreeBall::new(3, 3, 4).unwrap();
        assert_eq!(enumerate_walks(ball.graph(), 0, 4).unwrap()[0], 15);
        let k23 = complete_bipartite(2, 3).unwrap();
        assert_eq!(enumerate_nbw(&k23, 0, 2).unwrap().iter().sum::<u64>(), 3);
        let row: Vec<u64> = (0..5).map(|j| k23.has_edge(0, j) as u64).collect();
        assert_eq!(enumerate_nbw(&k23, 0, 1).unwrap(), row);
    }

    #[test]
    fn nbw_on_trees_follow_geodesics() {
        let ball = TreeBall::new(3, 4, 4).unwrap();
        let g = ball.graph();
        for r in 0..=4 {
            let counts = enumerate_nbw(g, 0, r).unwrap();
            for v in 0..g.vertex_count() {
                assert_eq!(counts[v], (ball.depth(v) == r) as u64);
            }
        }
    }

    #[test]
    fn work_cap() {
        let g = complete_bipartite(5, 5).unwrap();
        assert_eq!(
            enumerate_walks_with_cap(&g, 0, 10, 1000),
            Err(Error::WorkCapExceeded { cap: 1000 })
        );
    }
}
