//! Linear-time Relaxed-Voronoi on trees.
//!
//! On a tree every pair of vertices is joined by a unique path, which makes
//! three shortcuts exact:
//!
//! * `D(v)` comes from two sweeps (leaves to root, then root to leaves);
//! * distances from the root come from a plain traversal instead of a heap;
//! * Create-Cluster can carry `d(v, t_j)` along as `d(u, t_j) + w(u, v)` when
//!   `v` enters the frontier from `u`, and needs no rejected set.
//!
//! With root-distance order and all magnitudes equal to 3 the induced minor
//! has distortion at most 8.

use std::collections::VecDeque;

use serde::Serialize;

use crate::clustering::{InducedMinor, TerminalPartition};
use crate::error::{Error, Result};
use crate::graph::{WeightedGraph, UNREACHABLE};
use crate::terminals::TerminalSet;
use crate::validation::ValidationLevel;

/// Magnitude that minimizes the worst-case distortion bound on trees.
pub const TREE_MAGNITUDE: f64 = 3.0;

/// One vertex of the preorder layout.
#[derive(Debug, Clone, Copy)]
struct Node {
    parent: u32,
    /// The subtree of position `p` is `p..end`.
    end: u32,
    /// Weight of the edge to the parent (0 at the root).
    up_weight: f64,
}

/// A tree with a chosen root.
///
/// Besides the graph it keeps a copy of the tree laid out in DFS preorder:
/// position 0 is the root, every subtree occupies a contiguous range of
/// positions, and parents come before their children. The linear-time
/// pipeline runs entirely on this layout. Its sweeps are sequential scans and
/// a cluster, which is a connected piece of the tree, tends to sit in a narrow
/// range of positions.
#[derive(Debug, Clone)]
pub struct RootedTree {
    graph: WeightedGraph,
    root: usize,
    /// `order[p]` is the vertex at preorder position `p`.
    order: Vec<usize>,
    /// Inverse of `order`.
    position: Vec<u32>,
    nodes: Vec<Node>,
}

impl RootedTree {
    pub fn new(graph: WeightedGraph, root: usize) -> Result<Self> {
        let n = graph.n();
        if n == 0 {
            return Err(Error::NotATree("empty graph".into()));
        }
        if root >= n {
            return Err(Error::VertexOutOfRange { vertex: root, n });
        }
        if graph.m() != n - 1 {
            return Err(Error::NotATree(format!("{} edges on {n} vertices", graph.m())));
        }
        if n >= u32::MAX as usize {
            return Err(Error::Config(format!("trees are limited to {} vertices", u32::MAX - 1)));
        }
        const UNSEEN: u32 = u32::MAX;
        let mut position = vec![UNSEEN; n];
        let mut order = Vec::with_capacity(n);
        let mut nodes = Vec::with_capacity(n);
        // (vertex, parent position, edge weight); neighbours are pushed in
        // reverse so the first neighbour is visited first
        let mut stack = vec![(root, 0u32, 0.0)];
        while let Some((u, parent, up_weight)) = stack.pop() {
            if position[u] != UNSEEN {
                return Err(Error::NotATree(format!("vertex {u} is reachable twice")));
            }
            let p = order.len() as u32;
            position[u] = p;
            order.push(u);
            nodes.push(Node { parent, end: 0, up_weight });
            let before = stack.len();
            for (v, w) in graph.neighbors(u) {
                if position[v] == UNSEEN {
                    stack.push((v, p, w));
                }
            }
            stack[before..].reverse();
        }
        if order.len() != n {
            return Err(Error::NotATree(format!("only {} of {n} vertices reachable", order.len())));
        }
        // subtree ends, children before parents
        for p in (0..n).rev() {
            let end = nodes[p].end.max(p as u32 + 1);
            nodes[p].end = end;
            if p > 0 {
                let up = nodes[p].parent as usize;
                nodes[up].end = nodes[up].end.max(end);
            }
        }
        Ok(RootedTree { graph, root, order, position, nodes })
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// Parent of `v`; the root is its own parent.
    pub fn parent(&self, v: usize) -> usize {
        self.order[self.nodes[self.position[v] as usize].parent as usize]
    }

    /// Vertices in DFS preorder from the root.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn children(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let p = self.position[v] as usize;
        self.child_positions(p).map(move |c| (self.order[c], self.nodes[c].up_weight))
    }

    /// Same tree, different root.
    pub fn rerooted(&self, root: usize) -> Result<Self> {
        RootedTree::new(self.graph.clone(), root)
    }

    fn child_positions(&self, p: usize) -> impl Iterator<Item = usize> + '_ {
        let end = self.nodes[p].end as usize;
        let mut next = p + 1;
        std::iter::from_fn(move || {
            let c = next;
            (c < end).then(|| {
                next = self.nodes[c].end as usize;
                c
            })
        })
    }

    /// Neighbours of position `p` as `(position, edge weight)`.
    fn neighbor_positions(&self, p: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let node = self.nodes[p];
        let up = (p != 0).then_some((node.parent as usize, node.up_weight));
        up.into_iter().chain(self.child_positions(p).map(move |c| (c, self.nodes[c].up_weight)))
    }

    fn to_vertex_order(&self, by_position: &[f64]) -> Vec<f64> {
        self.position.iter().map(|&p| by_position[p as usize]).collect()
    }
}

/// Counts edge traversals across the phases of [`spr_tree`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct EdgeTouches {
    pub upward_sweep: usize,
    pub downward_sweep: usize,
    pub root_distances: usize,
    pub cluster_enqueues: usize,
}

impl EdgeTouches {
    pub fn total(&self) -> usize {
        self.upward_sweep + self.downward_sweep + self.root_distances + self.cluster_enqueues
    }
}

/// `D` indexed by preorder position.
fn sweep_terminal_distances(t: &RootedTree, terminals: &TerminalSet, touches: &mut EdgeTouches) -> Vec<f64> {
    let n = t.n();
    let mut below = vec![UNREACHABLE; n];
    for k in terminals.iter() {
        below[t.position[k] as usize] = 0.0;
    }
    // leaves to root: below[p] = distance to the closest terminal in p's subtree
    for p in (1..n).rev() {
        touches.upward_sweep += 1;
        if below[p] != UNREACHABLE {
            let node = t.nodes[p];
            let up = node.parent as usize;
            let via = below[p] + node.up_weight;
            if via < below[up] {
                below[up] = via;
            }
        }
    }
    // root to leaves
    let mut d = below;
    for p in 1..n {
        touches.downward_sweep += 1;
        let node = t.nodes[p];
        let up = node.parent as usize;
        if d[up] != UNREACHABLE {
            let via = d[up] + node.up_weight;
            if via < d[p] {
                d[p] = via;
            }
        }
    }
    d
}

/// `D(v)` for every vertex by two sweeps over the tree.
pub fn tree_terminal_distances(t: &RootedTree, terminals: &TerminalSet) -> Result<Vec<f64>> {
    if terminals.is_empty() {
        return Err(Error::NoTerminals);
    }
    terminals.check_bounds(t.n())?;
    Ok(t.to_vertex_order(&sweep_terminal_distances(t, terminals, &mut EdgeTouches::default())))
}

/// Root distances indexed by preorder position.
fn traverse_root_distances(t: &RootedTree, touches: &mut EdgeTouches) -> Vec<f64> {
    let n = t.n();
    let mut dist = vec![UNREACHABLE; n];
    dist[0] = 0.0;
    // the first visit is final because the path from the root is unique, so
    // any traversal works; in preorder, parents come first and a scan suffices
    for p in 1..n {
        touches.root_distances += 1;
        let node = t.nodes[p];
        dist[p] = dist[node.parent as usize] + node.up_weight;
    }
    dist
}

/// `d_T(root, v)` for every vertex without a priority queue.
pub fn tree_root_distances(t: &RootedTree) -> Vec<f64> {
    t.to_vertex_order(&traverse_root_distances(t, &mut EdgeTouches::default()))
}

#[derive(Debug, Clone)]
pub struct SprTreeOutput {
    /// Terminals in the processing order that was used.
    pub order: TerminalSet,
    pub partition: TerminalPartition,
    pub minor: InducedMinor,
    pub touches: EdgeTouches,
}

#[derive(Debug, Clone, Copy)]
pub struct SprTreeConfig {
    pub magnitude: f64,
    pub validation: ValidationLevel,
}

impl Default for SprTreeConfig {
    fn default() -> Self {
        SprTreeConfig {
            magnitude: TREE_MAGNITUDE,
            validation: ValidationLevel::from_env(),
        }
    }
}

/// Steiner point removal on a tree: root-distance order from `t.root()`,
/// every magnitude 3, linear-time clustering. Returns the partition and the
/// induced minor, which is itself a tree on the terminals.
pub fn spr_tree(t: &RootedTree, terminals: &TerminalSet) -> Result<SprTreeOutput> {
    spr_tree_with(t, terminals, &SprTreeConfig::default())
}

pub fn spr_tree_with(t: &RootedTree, terminals: &TerminalSet, config: &SprTreeConfig) -> Result<SprTreeOutput> {
    if !(config.magnitude >= 1.0) {
        return Err(Error::InvalidMagnitude(format!("tree magnitude {} is below 1", config.magnitude)));
    }
    if terminals.is_empty() {
        return Err(Error::NoTerminals);
    }
    terminals.check_bounds(t.n())?;

    let n = t.n();
    let r = config.magnitude;
    let mut touches = EdgeTouches::default();

    // everything below is indexed by preorder position
    let d_k = sweep_terminal_distances(t, terminals, &mut touches);
    let from_root = traverse_root_distances(t, &mut touches);
    let mut keyed: Vec<(f64, usize, usize)> = terminals
        .iter()
        .map(|k| {
            let p = t.position[k] as usize;
            (from_root[p], k, p)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    // per-position clustering state, kept together so a visit touches one record
    #[derive(Clone, Copy)]
    struct Slot {
        d_k: f64,
        /// Distance to the terminal of the owning cluster.
        to_own: f64,
        owner: u32,
    }
    const FREE: u32 = u32::MAX;
    let mut slots: Vec<Slot> = d_k.iter().map(|&d| Slot { d_k: d, to_own: 0.0, owner: FREE }).collect();
    drop(d_k);
    for (j, &(_, _, p)) in keyed.iter().enumerate() {
        slots[p].owner = j as u32;
    }
    let mut queue: VecDeque<(u32, f64)> = VecDeque::new();

    for (j, &(_, _, tp)) in keyed.iter().enumerate() {
        let j = j as u32;
        for (q, w) in t.neighbor_positions(tp) {
            if slots[q].owner == FREE {
                touches.cluster_enqueues += 1;
                queue.push_back((q as u32, w));
            }
        }
        while let Some((p, dp)) = queue.pop_front() {
            let p = p as usize;
            let slot = &mut slots[p];
            if dp <= r * slot.d_k {
                slot.owner = j;
                slot.to_own = dp;
                for (q, w) in t.neighbor_positions(p) {
                    if slots[q].owner == FREE {
                        touches.cluster_enqueues += 1;
                        queue.push_back((q as u32, dp + w));
                    }
                }
            }
        }
    }

    let mut edges: Vec<(usize, usize, f64)> = (1..n)
        .filter_map(|p| {
            let node = t.nodes[p];
            let (a, b) = (slots[p], slots[node.parent as usize]);
            let (i, j) = (a.owner as usize, b.owner as usize);
            (i != j).then(|| (i.min(j), i.max(j), a.to_own + node.up_weight + b.to_own))
        })
        .collect();
    edges.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));

    let owner_by_vertex = t.position.iter().map(|&p| slots[p as usize].owner as usize).collect();
    let order = TerminalSet::reordered(keyed.into_iter().map(|(_, k, _)| k).collect());
    let partition = TerminalPartition::from_owner(owner_by_vertex, order.len())?;
    if config.validation.enabled() {
        partition.validate(&t.graph, &order)?;
    }
    let minor = InducedMinor { k: order.len(), edges };
    Ok(SprTreeOutput { order, partition, minor, touches })
}
