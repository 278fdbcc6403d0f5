//! Seeded instance generators and a doubling-dimension estimate.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample as sample_indices;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, WeightedGraph};
use crate::magnitudes::{derive_seed, rng_for};
use crate::metric::{MetricSpace, TriangleCheck};
use crate::terminals::TerminalSet;
use crate::tree_fast::RootedTree;

/// Default inclusive range for continuous uniform edge weights.
pub const DEFAULT_WEIGHTS: (f64, f64) = (1.0, 10.0);

/// Complete binary tree of the given height with unit weights, rooted at 0.
/// Vertex `i` has children `2i+1` and `2i+2`, so the `2^height` leaves are
/// the contiguous ids `2^height - 1 ..= 2^(height+1) - 2` from left to right.
pub fn complete_binary_tree(height: u32) -> Result<RootedTree> {
    if height == 0 {
        return Err(Error::Config("binary tree height must be at least 1".into()));
    }
    let n = (1usize << (height + 1)) - 1;
    let edges = (1..n).map(|v| Edge::new((v - 1) / 2, v, 1.0)).collect();
    RootedTree::new(WeightedGraph::new(n, edges)?, 0)
}

/// Leaf ids of [`complete_binary_tree`], left to right.
pub fn binary_tree_leaves(height: u32) -> Vec<usize> {
    let first = (1usize << height) - 1;
    (first..first + (1usize << height)).collect()
}

fn uniform_weight<R: Rng>(rng: &mut R, (lo, hi): (f64, f64)) -> f64 {
    if hi > lo {
        rng.gen_range(lo..=hi)
    } else {
        lo
    }
}

/// Random-parent tree: vertex `i > 0` attaches to a uniform parent in `0..i`.
pub fn random_tree(n: usize, weights: (f64, f64), seed: u64) -> Result<WeightedGraph> {
    if n == 0 {
        return Err(Error::Config("tree needs at least one vertex".into()));
    }
    let mut rng = rng_for(derive_seed(seed, "tree", 0));
    let edges = (1..n)
        .map(|v| {
            let p = rng.gen_range(0..v);
            Edge::new(p, v, uniform_weight(&mut rng, weights))
        })
        .collect();
    WeightedGraph::new(n, edges)
}

/// A random spanning tree plus `m - (n - 1)` distinct extra edges.
pub fn random_connected_graph(n: usize, m: usize, weights: (f64, f64), seed: u64) -> Result<WeightedGraph> {
    if n == 0 || m + 1 < n {
        return Err(Error::Config(format!("cannot build a connected graph with n = {n}, m = {m}")));
    }
    let max_m = n * (n - 1) / 2;
    if m > max_m {
        return Err(Error::Config(format!("m = {m} exceeds {max_m} possible edges")));
    }
    let mut edges = random_tree(n, weights, seed)?.edges().to_vec();
    let mut present: HashSet<(usize, usize)> = edges.iter().map(|e| (e.u.min(e.v), e.u.max(e.v))).collect();
    let mut rng = rng_for(derive_seed(seed, "extra-edges", 0));
    while edges.len() < m {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v && present.insert((u.min(v), u.max(v))) {
            edges.push(Edge::new(u, v, uniform_weight(&mut rng, weights)));
        }
    }
    WeightedGraph::new(n, edges)
}

fn grid_coords(side: usize, id: usize) -> (f64, f64) {
    ((id / side) as f64, (id % side) as f64)
}

/// `side × side` integer grid under the `p`-norm (`p = ∞` allowed).
pub fn grid_metric(side: usize, p: f64) -> Result<MetricSpace> {
    if side < 2 {
        return Err(Error::Config("grid side must be at least 2".into()));
    }
    if !(p >= 1.0) {
        return Err(Error::Config(format!("p-norm needs p >= 1, got {p}")));
    }
    MetricSpace::from_fn(side * side, TriangleCheck::Auto, |a, b| {
        let (ax, ay) = grid_coords(side, a);
        let (bx, by) = grid_coords(side, b);
        let (dx, dy) = ((ax - bx).abs(), (ay - by).abs());
        if p == 1.0 {
            dx + dy
        } else if p.is_infinite() {
            dx.max(dy)
        } else {
            (dx.powf(p) + dy.powf(p)).powf(1.0 / p)
        }
    })
}

/// Unit-weight grid graph; its shortest-path metric is the L1 grid metric.
pub fn grid_graph(side: usize) -> Result<WeightedGraph> {
    if side < 2 {
        return Err(Error::Config("grid side must be at least 2".into()));
    }
    let id = |r: usize, c: usize| r * side + c;
    let mut edges = Vec::with_capacity(2 * side * (side - 1));
    for r in 0..side {
        for c in 0..side {
            if c + 1 < side {
                edges.push(Edge::new(id(r, c), id(r, c + 1), 1.0));
            }
            if r + 1 < side {
                edges.push(Edge::new(id(r, c), id(r + 1, c), 1.0));
            }
        }
    }
    WeightedGraph::new(side * side, edges)
}

/// `n` uniform points in the unit square under the Euclidean distance.
pub fn random_euclidean_metric(n: usize, seed: u64) -> Result<MetricSpace> {
    let mut rng = rng_for(derive_seed(seed, "points", 0));
    let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen(), rng.gen())).collect();
    MetricSpace::from_fn(n, TriangleCheck::Auto, |a, b| {
        (pts[a].0 - pts[b].0).hypot(pts[a].1 - pts[b].1)
    })
}

/// `k` distinct terminals chosen uniformly, listed in increasing id order.
pub fn random_terminals(n: usize, k: usize, seed: u64) -> Result<TerminalSet> {
    if k == 0 || k > n {
        return Err(Error::Config(format!("cannot pick {k} terminals out of {n} vertices")));
    }
    let mut rng = rng_for(derive_seed(seed, "terminals", 0));
    let mut ids = sample_indices(&mut rng, n, k).into_vec();
    ids.sort_unstable();
    TerminalSet::new(ids, n)
}

/// Vertices of degree at most one, in id order.
pub fn leaves(g: &WeightedGraph) -> Vec<usize> {
    (0..g.n()).filter(|&v| g.degree(v) <= 1).collect()
}

/// Greedy-net estimate of the doubling dimension.
///
/// For each scale `r = diam / 2^i` down to the smallest positive distance, a
/// greedy `r/2`-net is built and the largest number of net points inside one
/// ball of radius `r` is recorded. The estimate is `log2` of the largest such
/// count. It is a heuristic meant for choosing `--ddim`.
pub fn estimate_ddim(m: &MetricSpace) -> Result<f64> {
    let n = m.n();
    if n < 2 {
        return Err(Error::DegenerateMetric("need at least two points".into()));
    }
    let diam = m.diameter();
    let min_positive = (0..n)
        .flat_map(|x| m.row(x)[x + 1..].iter().copied())
        .filter(|&d| d > 0.0)
        .fold(f64::INFINITY, f64::min);
    if diam <= 0.0 || !min_positive.is_finite() {
        return Err(Error::DegenerateMetric("all distances are zero".into()));
    }

    let mut best = 1usize;
    let mut r = diam;
    while r >= min_positive {
        let half = r / 2.0;
        let mut net: Vec<usize> = Vec::new();
        for x in 0..n {
            if net.iter().all(|&c| m.dist(x, c) > half) {
                net.push(x);
            }
        }
        for x in 0..n {
            let inside = net.iter().filter(|&&c| m.dist(x, c) <= r).count();
            best = best.max(inside);
        }
        r /= 2.0;
    }
    Ok((best as f64).log2())
}

/// Instance family understood by the CLI (`btree:<h>`, `tree:<n>`,
/// `graph:<n>,<m>`, `grid:<side>`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    CompleteBinaryTree { height: u32 },
    RandomTree { n: usize, weights: (f64, f64) },
    RandomConnectedGraph { n: usize, m: usize, weights: (f64, f64) },
    /// Unit grid graph (L1 grid metric).
    Grid { side: usize },
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("unknown family `{s}`"));
        let (head, arg) = s.split_once(':').ok_or_else(bad)?;
        let int = |a: &str| a.trim().parse::<usize>().map_err(|_| bad());
        Ok(match head {
            "btree" => Family::CompleteBinaryTree { height: int(arg)? as u32 },
            "tree" => Family::RandomTree { n: int(arg)?, weights: DEFAULT_WEIGHTS },
            "graph" => {
                let (n, m) = arg.split_once(',').ok_or_else(bad)?;
                Family::RandomConnectedGraph { n: int(n)?, m: int(m)?, weights: DEFAULT_WEIGHTS }
            }
            "grid" => Family::Grid { side: int(arg)? },
            _ => return Err(bad()),
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::CompleteBinaryTree { height } => write!(f, "btree:{height}"),
            Family::RandomTree { n, .. } => write!(f, "tree:{n}"),
            Family::RandomConnectedGraph { n, m, .. } => write!(f, "graph:{n},{m}"),
            Family::Grid { side } => write!(f, "grid:{side}"),
        }
    }
}

impl Family {
    pub fn build(&self, seed: u64) -> Result<WeightedGraph> {
        match *self {
            Family::CompleteBinaryTree { height } => Ok(complete_binary_tree(height)?.graph().clone()),
            Family::RandomTree { n, weights } => random_tree(n, weights, seed),
            Family::RandomConnectedGraph { n, m, weights } => random_connected_graph(n, m, weights, seed),
            Family::Grid { side } => grid_graph(side),
        }
    }
}

/// How terminals are picked from a generated graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminalRule {
    AllLeaves,
    RandomSubset(usize),
    Explicit(Vec<usize>),
}

impl FromStr for TerminalRule {
    type Err = Error;

    /// `leaves`, `random:<k>` or `list:<id>,<id>,...`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("unknown terminal rule `{s}`"));
        if s == "leaves" {
            return Ok(TerminalRule::AllLeaves);
        }
        let (head, arg) = s.split_once(':').ok_or_else(bad)?;
        match head {
            "random" => Ok(TerminalRule::RandomSubset(arg.trim().parse().map_err(|_| bad())?)),
            "list" => arg
                .split(',')
                .map(|x| x.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()
                .map(TerminalRule::Explicit),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for TerminalRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TerminalRule::AllLeaves => write!(f, "leaves"),
            TerminalRule::RandomSubset(k) => write!(f, "random:{k}"),
            TerminalRule::Explicit(ids) => {
                let ids: Vec<String> = ids.iter().map(|i| i.to_string()).collect();
                write!(f, "list:{}", ids.join(","))
            }
        }
    }
}

impl TerminalRule {
    pub fn pick(&self, g: &WeightedGraph, seed: u64) -> Result<TerminalSet> {
        match self {
            TerminalRule::AllLeaves => TerminalSet::new(leaves(g), g.n()),
            TerminalRule::RandomSubset(k) => random_terminals(g.n(), *k, seed),
            TerminalRule::Explicit(ids) => TerminalSet::new(ids.clone(), g.n()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: Family,
    pub terminals: TerminalRule,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn generate(&self) -> Result<(WeightedGraph, TerminalSet)> {
        let g = self.family.build(self.seed)?;
        let k = self.terminals.pick(&g, self.seed)?;
        Ok((g, k))
    }
}
