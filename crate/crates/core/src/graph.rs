//! Undirected weighted graphs and shortest-path primitives.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::terminals::TerminalSet;

/// Distance assigned to vertices that no source reaches.
///
/// Strictly greater than every finite sum; additions involving it are guarded
/// so it never leaks into a `min`.
pub const UNREACHABLE: f64 = f64::INFINITY;

/// One undirected edge `{u, v}` with non-negative weight `w`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

impl Edge {
    pub fn new(u: usize, v: usize, w: f64) -> Self {
        Edge { u, v, w }
    }
}

/// Undirected graph with non-negative edge weights, stored as an edge list
/// plus a compressed adjacency index.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<f64>,
}

impl WeightedGraph {
    /// Validates ids, weights and self-loops. Connectivity is not required
    /// here; see [`WeightedGraph::ensure_connected`].
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self> {
        let mut degree = vec![0usize; n + 1];
        for e in &edges {
            for x in [e.u, e.v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if e.u == e.v {
                return Err(Error::SelfLoop(e.u));
            }
            if !(e.w >= 0.0) || !e.w.is_finite() {
                return Err(Error::InvalidWeight { u: e.u, v: e.v, weight: e.w });
            }
            degree[e.u] += 1;
            degree[e.v] += 1;
        }

        let mut offsets = vec![0usize; n + 1];
        for v in 0..n {
            offsets[v + 1] = offsets[v] + degree[v];
        }
        let mut cursor = offsets.clone();
        let mut targets = vec![0usize; offsets[n]];
        let mut weights = vec![0.0f64; offsets[n]];
        for e in &edges {
            targets[cursor[e.u]] = e.v;
            weights[cursor[e.u]] = e.w;
            cursor[e.u] += 1;
            targets[cursor[e.v]] = e.u;
            weights[cursor[e.v]] = e.w;
            cursor[e.v] += 1;
        }

        Ok(WeightedGraph { n, edges, offsets, targets, weights })
    }

    /// Like [`WeightedGraph::new`] but also rejects disconnected input.
    pub fn new_connected(n: usize, edges: Vec<Edge>) -> Result<Self> {
        let g = Self::new(n, edges)?;
        g.ensure_connected()?;
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Neighbors of `v` together with the connecting edge weight.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.offsets[v]..self.offsets[v + 1];
        self.targets[range.clone()]
            .iter()
            .copied()
            .zip(self.weights[range].iter().copied())
    }

    pub fn is_connected(&self) -> bool {
        self.first_unreachable().is_none()
    }

    pub fn ensure_connected(&self) -> Result<()> {
        match self.first_unreachable() {
            None => Ok(()),
            Some(v) => Err(Error::Disconnected(v)),
        }
    }

    fn first_unreachable(&self) -> Option<usize> {
        if self.n == 0 {
            return None;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for (v, _) in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.iter().position(|&s| !s)
    }

    pub fn is_tree(&self) -> bool {
        self.n >= 1 && self.m() == self.n - 1 && self.is_connected()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct HeapEntry {
    dist: f64,
    vertex: usize,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on distance, then on vertex id
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dijkstra seeded with every vertex of `sources` at distance zero.
pub(crate) fn dijkstra_multi(g: &WeightedGraph, sources: &[usize]) -> Vec<f64> {
    let mut dist = vec![UNREACHABLE; g.n()];
    let mut heap = BinaryHeap::with_capacity(sources.len());
    for &s in sources {
        dist[s] = 0.0;
        heap.push(HeapEntry { dist: 0.0, vertex: s });
    }
    while let Some(HeapEntry { dist: d, vertex: u }) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for (v, w) in g.neighbors(u) {
            let candidate = d + w;
            if candidate < dist[v] {
                dist[v] = candidate;
                heap.push(HeapEntry { dist: candidate, vertex: v });
            }
        }
    }
    dist
}

/// Exact single-source distances; unreachable vertices get [`UNREACHABLE`].
pub fn shortest_paths_from(g: &WeightedGraph, source: usize) -> Result<Vec<f64>> {
    if source >= g.n() {
        return Err(Error::VertexOutOfRange { vertex: source, n: g.n() });
    }
    Ok(dijkstra_multi(g, &[source]))
}

/// `D(v)`: distance from every vertex to its closest terminal, computed by a
/// single multi-source run.
pub fn terminal_distances(g: &WeightedGraph, terminals: &TerminalSet) -> Result<Vec<f64>> {
    if terminals.is_empty() {
        return Err(Error::NoTerminals);
    }
    terminals.check_bounds(g.n())?;
    Ok(dijkstra_multi(g, terminals.as_slice()))
}

/// Distances from each terminal (in π order) to every vertex.
pub fn terminal_rows(g: &WeightedGraph, terminals: &TerminalSet) -> Result<Vec<Vec<f64>>> {
    terminals.check_bounds(g.n())?;
    Ok(terminals
        .iter()
        .map(|t| dijkstra_multi(g, &[t]))
        .collect())
}
