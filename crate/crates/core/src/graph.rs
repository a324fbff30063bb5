//! Finite simple undirected graphs with optional bipartition labels.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bipartition label. Side `U` holds the degree-`d_U` vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    U,
    W,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::U => Side::W,
            Side::W => Side::U,
        }
    }
}

/// Immutable simple graph. Neighbor lists are sorted, so every traversal
/// over them is deterministic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    side: Option<Vec<Side>>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting loops, repeated edges and
    /// (when labels are given) edges inside one side.
    pub fn build(vertex_count: usize, edges: &[(usize, usize)], side: Option<Vec<Side>>) -> Result<Graph> {
        if let Some(labels) = &side {
            if labels.len() != vertex_count {
                return Err(Error::SideLengthMismatch {
                    expected: vertex_count,
                    got: labels.len(),
                });
            }
        }
        let mut adjacency = vec![Vec::new(); vertex_count];
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= vertex_count {
                    return Err(Error::VertexOutOfRange { index: x, vertex_count });
                }
            }
            if u == v {
                return Err(Error::LoopEdge(u));
            }
            if let Some(labels) = &side {
                if labels[u] == labels[v] {
                    return Err(Error::SameSideEdge(u, v));
                }
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for (u, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateEdge(u.min(w[0]), u.max(w[0])));
            }
        }
        Ok(Graph {
            adjacency,
            side,
            edge_count: edges.len(),
        })
    }

    /// Builds from neighbor lists that are already known to be valid.
    pub(crate) fn from_adjacency(mut adjacency: Vec<Vec<usize>>, side: Option<Vec<Side>>) -> Graph {
        let mut half = 0;
        for list in adjacency.iter_mut() {
            list.sort_unstable();
            half += list.len();
        }
        Graph {
            adjacency,
            side,
            edge_count: half / 2,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn sides(&self) -> Option<&[Side]> {
        self.side.as_deref()
    }

    pub fn side(&self, v: usize) -> Option<Side> {
        self.side.as_ref().map(|s| s[v])
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                index: v,
                vertex_count: self.vertex_count(),
            })
        }
    }

    /// Undirected edges `(u, v)` with `u < v`, in lexicographic order. The
    /// position of an edge in this list is its rank.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for (u, list) in self.adjacency.iter().enumerate() {
            for &v in list {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.vertex_count() && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// `(d_U, d_W)` when side labels are present, both sides are non-empty and
    /// each side has a single degree.
    pub fn biregular(&self) -> Option<(usize, usize)> {
        let side = self.side.as_ref()?;
        let mut du = None;
        let mut dw = None;
        for (v, s) in side.iter().enumerate() {
            let slot = match s {
                Side::U => &mut du,
                Side::W => &mut dw,
            };
            match *slot {
                None => *slot = Some(self.degree(v)),
                Some(d) if d != self.degree(v) => return None,
                Some(_) => {}
            }
        }
        Some((du?, dw?))
    }

    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adjacency.first()?.len();
        self.adjacency.iter().all(|l| l.len() == d).then_some(d)
    }

    /// Breadth-first distances from `source`; `None` for unreachable vertices.
    pub fn distances_from(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &v in &self.adjacency[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() == 0 || self.distances_from(0).iter().all(Option::is_some)
    }

    /// Proper 2-colouring with vertex 0 of each component on side `U`, or
    /// `None` if the graph has an odd cycle.
    pub fn two_coloring(&self) -> Option<Vec<Side>> {
        let n = self.vertex_count();
        let mut colour: Vec<Option<Side>> = vec![None; n];
        for start in 0..n {
            if colour[start].is_some() {
                continue;
            }
            colour[start] = Some(Side::U);
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                let cu = colour[u].unwrap();
                for &v in &self.adjacency[u] {
                    match colour[v] {
                        None => {
                            colour[v] = Some(cu.flip());
                            queue.push_back(v);
                        }
                        Some(cv) if cv == cu => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(colour.into_iter().map(Option::unwrap).collect())
    }

    pub fn with_sides(&self, side: Vec<Side>) -> Result<Graph> {
        Graph::build(self.vertex_count(), &self.edges(), Some(side))
    }

    /// The graph with edge `{u, v}` deleted.
    pub fn without_edge(&self, u: usize, v: usize) -> Result<Graph> {
        if !self.has_edge(u, v) {
            return Err(Error::InvalidParameter(format!("no edge ({u}, {v})")));
        }
        let mut adjacency = self.adjacency.clone();
        adjacency[u].retain(|&x| x != v);
        adjacency[v].retain(|&x| x != u);
        Ok(Graph::from_adjacency(adjacency, self.side.clone()))
    }
}

/// `K_{m,n}`: vertices `0..m` on side `U` (degree `n`), `m..m+n` on side `W`.
pub fn complete_bipartite(m: usize, n: usize) -> Result<Graph> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidParameter(format!(
            "complete bipartite graph needs m, n >= 1, got ({m}, {n})"
        )));
    }
    let edges: Vec<_> = (0..m).flat_map(|u| (0..n).map(move |w| (u, m + w))).collect();
    let mut side = vec![Side::U; m];
    side.extend(std::iter::repeat_n(Side::W, n));
    Graph::build(m + n, &edges, Some(side))
}

/// Replaces every edge by a path of length two. Original vertices keep their
/// indices and go to side `W`; the midpoint of the edge of rank `i` is vertex
/// `n + i` on side `U`.
pub fn subdivision(g: &Graph) -> Graph {
    let n = g.vertex_count();
    let mut edges = Vec::with_capacity(2 * g.edge_count());
    for (i, (u, v)) in g.edges().into_iter().enumerate() {
        edges.push((u, n + i));
        edges.push((v, n + i));
    }
    let mut side = vec![Side::W; n];
    side.extend(std::iter::repeat_n(Side::U, g.edge_count()));
    Graph::build(n + g.edge_count(), &edges, Some(side)).expect("subdivision of a simple graph is simple")
}

pub fn complete_graph(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidParameter("complete graph needs n >= 1".into()));
    }
    let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    Graph::build(n, &edges, None)
}

pub fn cycle_graph(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("cycle needs n >= 3, got {n}")));
    }
    let edges: Vec<_> = (0..n).map(|u| (u, (u + 1) % n)).collect();
    let side = n
        .is_multiple_of(2)
        .then(|| (0..n).map(|v| if v % 2 == 0 { Side::U } else { Side::W }).collect());
    Graph::build(n, &edges, side)
}

pub fn path_graph(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidParameter("path needs n >= 1".into()));
    }
    let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    Graph::build(n, &edges, None)
}
