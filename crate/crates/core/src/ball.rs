//! Radius-`R` balls: balls of the `(k, l)`-bi-regular tree and balls of the
//! universal cover of a finite graph.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::graph::{Graph, Side};

/// Default bound on the number of vertices a ball may have.
pub const DEFAULT_SIZE_CAP: usize = 10_000_000;

/// Number of vertices at distance `r` from a side-`U` vertex of the
/// `(k, l)`-bi-regular tree.
pub fn sphere_size(k: usize, l: usize, r: usize) -> BigUint {
    if r == 0 {
        return BigUint::one();
    }
    let half = (r / 2) as u32;
    let k_big = BigUint::from(k);
    if r.is_multiple_of(2) {
        k_big * BigUint::from(l - 1).pow(half) * BigUint::from(k - 1).pow(half - 1)
    } else {
        k_big * BigUint::from(l - 1).pow(half) * BigUint::from(k - 1).pow(half)
    }
}

/// Number of vertices within distance `r`.
pub fn ball_size(k: usize, l: usize, r: usize) -> BigUint {
    (0..=r).map(|n| sphere_size(k, l, n)).sum()
}

/// Degree in the infinite tree of a vertex at depth `n` (root on side `U`).
pub fn tree_degree(k: usize, l: usize, n: usize) -> usize {
    if n.is_multiple_of(2) {
        k
    } else {
        l
    }
}

pub(crate) fn check_tree_degrees(k: usize, l: usize) -> Result<()> {
    if k < 2 || l < 2 {
        return Err(Error::InvalidParameter(format!(
            "tree degrees must be at least 2, got ({k}, {l})"
        )));
    }
    Ok(())
}

/// Ball of radius `radius` around the root of the `(k, l)`-bi-regular tree.
///
/// Vertices are numbered breadth-first: the root is 0 and each sphere is a
/// contiguous index range.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeBall {
    k: usize,
    l: usize,
    radius: usize,
    graph: Graph,
    depth: Vec<usize>,
    parent: Vec<Option<usize>>,
    sphere_start: Vec<usize>,
}

impl TreeBall {
    pub fn new(k: usize, l: usize, radius: usize) -> Result<TreeBall> {
        TreeBall::with_cap(k, l, radius, DEFAULT_SIZE_CAP)
    }

    pub fn with_cap(k: usize, l: usize, radius: usize, cap: usize) -> Result<TreeBall> {
        check_tree_degrees(k, l)?;
        let total = ball_size(k, l, radius);
        let n = match total.to_usize() {
            Some(n) if n <= cap => n,
            _ => {
                return Err(Error::SizeCapExceeded {
                    needed: total.to_u128().unwrap_or(u128::MAX),
                    cap,
                })
            }
        };
        let mut adjacency = vec![Vec::new(); n];
        let mut depth = vec![0; n];
        let mut parent = vec![None; n];
        let mut sphere_start = vec![0, 1];
        let mut next = 1;
        let mut frontier = 0..1;
        for d in 0..radius {
            let children = if d == 0 { k } else { tree_degree(k, l, d) - 1 };
            for v in frontier.clone() {
                for _ in 0..children {
                    adjacency[v].push(next);
                    adjacency[next].push(v);
                    depth[next] = d + 1;
                    parent[next] = Some(v);
                    next += 1;
                }
            }
            frontier = frontier.end..next;
            sphere_start.push(next);
        }
        debug_assert_eq!(next, n);
        let side = depth
            .iter()
            .map(|&d| if d % 2 == 0 { Side::U } else { Side::W })
            .collect();
        Ok(TreeBall {
            k,
            l,
            radius,
            graph: Graph::from_adjacency(adjacency, Some(side)),
            depth,
            parent,
            sphere_start,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    pub fn depths(&self) -> &[usize] {
        &self.depth
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    /// Index range of the vertices at depth `n`.
    pub fn sphere(&self, n: usize) -> std::ops::Range<usize> {
        self.sphere_start[n]..self.sphere_start[n + 1]
    }

    /// Degree of `v` in the infinite tree, which differs from the realised
    /// degree only on the boundary sphere.
    pub fn ideal_degree(&self, v: usize) -> usize {
        tree_degree(self.k, self.l, self.depth[v])
    }
}

/// Ball of the universal cover of a finite graph, built from the
/// non-backtracking paths that start at `base`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverBall {
    radius: usize,
    graph: Graph,
    depth: Vec<usize>,
    parent: Vec<Option<usize>>,
    projection: Vec<usize>,
}

impl CoverBall {
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    /// Base-graph vertex under each cover vertex.
    pub fn projection(&self) -> &[usize] {
        &self.projection
    }

    /// Cover vertices lying over `v`.
    pub fn fibre(&self, v: usize) -> Vec<usize> {
        (0..self.projection.len())
            .filter(|&x| self.projection[x] == v)
            .collect()
    }

    pub fn sphere_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.radius + 1];
        for &d in &self.depth {
            sizes[d] += 1;
        }
        sizes
    }
}

pub fn universal_cover_ball(g: &Graph, base: usize, radius: usize) -> Result<CoverBall> {
    universal_cover_ball_with_cap(g, base, radius, DEFAULT_SIZE_CAP)
}

pub fn universal_cover_ball_with_cap(g: &Graph, base: usize, radius: usize, cap: usize) -> Result<CoverBall> {
    g.check_vertex(base)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new()];
    let mut depth = vec![0];
    let mut parent = vec![None];
    let mut projection = vec![base];
    // (cover vertex, base vertex it came from)
    let mut queue = VecDeque::from([(0usize, None::<usize>)]);
    while let Some((x, came_from)) = queue.pop_front() {
        if depth[x] == radius {
            continue;
        }
        let here = projection[x];
        for &w in g.neighbors(here) {
            if Some(w) == came_from {
                continue;
            }
            let y = projection.len();
            if y >= cap {
                return Err(Error::SizeCapExceeded {
                    needed: y as u128 + 1,
                    cap,
                });
            }
            adjacency.push(vec![x]);
            adjacency[x].push(y);
            depth.push(depth[x] + 1);
            parent.push(Some(x));
            projection.push(w);
            queue.push_back((y, Some(here)));
        }
    }
    let side = g.sides().map(|s| projection.iter().map(|&v| s[v]).collect());
    Ok(CoverBall {
        radius,
        graph: Graph::from_adjacency(adjacency, side),
        depth,
        parent,
        projection,
    })
}

/// Rooted-tree isomorphism by canonical child-multiset labelling.
///
/// Returns `false` when either graph is not a tree.
pub fn rooted_trees_isomorphic(a: &Graph, root_a: usize, b: &Graph, root_b: usize) -> bool {
    if a.vertex_count() != b.vertex_count() {
        return false;
    }
    let mut table: HashMap<Vec<usize>, usize> = HashMap::new();
    match (
        canonical_label(a, root_a, &mut table),
        canonical_label(b, root_b, &mut table),
    ) {
        (Some(x), Some(y)) => x == y,
        _ => false,
    }
}

fn canonical_label(g: &Graph, root: usize, table: &mut HashMap<Vec<usize>, usize>) -> Option<usize> {
    let n = g.vertex_count();
    if root >= n || g.edge_count() + 1 != n || !g.is_connected() {
        return None;
    }
    let mut order = Vec::with_capacity(n);
    let mut parent = vec![usize::MAX; n];
    parent[root] = root;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &v in g.neighbors(u) {
            if parent[v] == usize::MAX {
                parent[v] = u;
                queue.push_back(v);
            }
        }
    }
    let mut label = vec![0; n];
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &u in order.iter().rev() {
        let mut key = std::mem::take(&mut children[u]);
        key.sort_unstable();
        let next = table.len();
        let id = *table.entry(key).or_insert(next);
        label[u] = id;
        if u != root {
            children[parent[u]].push(id);
        }
    }
    Some(label[root])
}
