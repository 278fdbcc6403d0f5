//! The Relaxed-Voronoi engines.
//!
//! Terminals are processed in π order. Terminal `t_j` claims every still
//! unclaimed point `x` with `d(t_j, x) <= R_j * D(x)`, where `D(x)` is the
//! distance from `x` to its nearest terminal. The metric engine claims all such
//! points at once; the graphic engine grows the cluster outwards from `t_j`
//! through accepted vertices only, so every cluster stays connected.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{dijkstra_multi, terminal_distances, Edge, WeightedGraph};
use crate::magnitudes::MagnitudeVector;
use crate::metric::MetricSpace;
use crate::terminals::TerminalSet;
use crate::validation::ValidationLevel;

/// A map `f: X -> K` with `f(t) = t` for every terminal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Retraction {
    pub assignment: Vec<usize>,
}

impl Retraction {
    pub fn image(&self, x: usize) -> usize {
        self.assignment[x]
    }

    /// Checks `f(t) = t` on terminals and that every image is a terminal.
    pub fn validate(&self, terminals: &TerminalSet) -> Result<()> {
        let index = terminals.index_map(self.assignment.len());
        for (x, &t) in self.assignment.iter().enumerate() {
            if t >= index.len() || index[t].is_none() {
                return Err(Error::InvalidPartition(format!("point {x} maps to non-terminal {t}")));
            }
            if index[x].is_some() && t != x {
                return Err(Error::InvalidPartition(format!("terminal {x} maps to {t}")));
            }
        }
        Ok(())
    }
}

/// Clusters `V_1..V_k` indexed by position in π. Each cluster lists its
/// vertices in increasing id order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TerminalPartition {
    pub clusters: Vec<Vec<usize>>,
    #[serde(skip)]
    pub owner: Vec<usize>,
}

impl TerminalPartition {
    /// Builds the clusters from `owner[v] = cluster index`.
    pub fn from_owner(owner: Vec<usize>, k: usize) -> Result<Self> {
        let mut sizes = vec![0usize; k];
        for (v, &i) in owner.iter().enumerate() {
            if i >= k {
                return Err(Error::InvalidPartition(format!("vertex {v} has no cluster")));
            }
            sizes[i] += 1;
        }
        let mut clusters: Vec<Vec<usize>> = sizes.iter().map(|&s| Vec::with_capacity(s)).collect();
        for (v, &i) in owner.iter().enumerate() {
            clusters[i].push(v);
        }
        Ok(TerminalPartition { clusters, owner })
    }

    /// Builds from explicit clusters; rejects overlaps and uncovered vertices.
    pub fn from_clusters(mut clusters: Vec<Vec<usize>>, n: usize) -> Result<Self> {
        let mut owner = vec![usize::MAX; n];
        for (i, cluster) in clusters.iter_mut().enumerate() {
            cluster.sort_unstable();
            for &v in cluster.iter() {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
                if owner[v] != usize::MAX {
                    return Err(Error::InvalidPartition(format!(
                        "vertex {v} is in clusters {} and {i}",
                        owner[v]
                    )));
                }
                owner[v] = i;
            }
        }
        if let Some(v) = owner.iter().position(|&i| i == usize::MAX) {
            return Err(Error::InvalidPartition(format!("vertex {v} is not covered")));
        }
        Ok(TerminalPartition { clusters, owner })
    }

    pub fn k(&self) -> usize {
        self.clusters.len()
    }

    pub fn cluster_of(&self, v: usize) -> usize {
        self.owner[v]
    }

    /// Retraction sending every vertex to the terminal of its cluster.
    pub fn to_retraction(&self, terminals: &TerminalSet) -> Retraction {
        Retraction {
            assignment: self.owner.iter().map(|&i| terminals.get(i)).collect(),
        }
    }

    /// Checks that the clusters are disjoint, cover `V`, contain their
    /// terminal and induce connected subgraphs.
    pub fn validate(&self, g: &WeightedGraph, terminals: &TerminalSet) -> Result<()> {
        let n = g.n();
        let k = terminals.len();
        let fail = |msg: String| Err(Error::InvalidPartition(msg));
        if self.clusters.len() != k {
            return fail(format!("{} clusters for {k} terminals", self.clusters.len()));
        }
        if self.owner.len() != n {
            return fail(format!("owner map has {} entries for {n} vertices", self.owner.len()));
        }
        let mut count = 0usize;
        for (i, cluster) in self.clusters.iter().enumerate() {
            for &v in cluster {
                if v >= n || self.owner[v] != i {
                    return fail(format!("vertex {v} listed in cluster {i} but owned elsewhere"));
                }
            }
            count += cluster.len();
        }
        if count != n {
            return fail(format!("clusters hold {count} vertices, graph has {n}"));
        }

        let mut seen = vec![false; n];
        let mut stack = Vec::new();
        for (i, t) in terminals.iter().enumerate() {
            if self.owner[t] != i {
                return fail(format!("terminal {t} is not in its own cluster {i}"));
            }
            seen[t] = true;
            stack.push(t);
            let mut reached = 1usize;
            while let Some(u) = stack.pop() {
                for (v, _) in g.neighbors(u) {
                    if !seen[v] && self.owner[v] == i {
                        seen[v] = true;
                        reached += 1;
                        stack.push(v);
                    }
                }
            }
            if reached != self.clusters[i].len() {
                return fail(format!(
                    "cluster {i} of terminal {t} is disconnected ({reached} of {} reachable)",
                    self.clusters[i].len()
                ));
            }
        }
        Ok(())
    }
}

/// Order in which Create-Cluster pops its frontier. Membership does not
/// depend on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Frontier {
    #[default]
    Fifo,
    Lifo,
}

const OPEN: u8 = 0;
const QUEUED: u8 = 1;
const ACCEPTED: u8 = 2;
const REJECTED: u8 = 3;

/// Grows the cluster of `terminal` over the `unclustered` vertices.
///
/// A frontier vertex `v` joins iff `dist_to_terminal[v] <= magnitude * d_k[v]`;
/// only neighbours of accepted vertices enter the frontier and rejected
/// vertices are never reconsidered. Returns the cluster including `terminal`.
pub fn create_cluster(
    g: &WeightedGraph,
    unclustered: &[bool],
    terminal: usize,
    magnitude: f64,
    d_k: &[f64],
    dist_to_terminal: &[f64],
    frontier: Frontier,
) -> Vec<usize> {
    let mut state = vec![OPEN; g.n()];
    let mut queue = VecDeque::new();
    let mut cluster = vec![terminal];
    state[terminal] = ACCEPTED;
    let enqueue_neighbors = |u: usize, state: &mut [u8], queue: &mut VecDeque<usize>| {
        for (v, _) in g.neighbors(u) {
            if unclustered[v] && state[v] == OPEN {
                state[v] = QUEUED;
                queue.push_back(v);
            }
        }
    };
    enqueue_neighbors(terminal, &mut state, &mut queue);

    loop {
        let next = match frontier {
            Frontier::Fifo => queue.pop_front(),
            Frontier::Lifo => queue.pop_back(),
        };
        let Some(v) = next else { break };
        if dist_to_terminal[v] <= magnitude * d_k[v] {
            state[v] = ACCEPTED;
            cluster.push(v);
            enqueue_neighbors(v, &mut state, &mut queue);
        } else {
            state[v] = REJECTED;
        }
    }
    cluster
}

/// Precomputed distances for repeated graphic runs on one instance:
/// `D(·)` and one shortest-path row per terminal.
#[derive(Debug, Clone)]
pub struct GraphicEngine<'g> {
    graph: &'g WeightedGraph,
    terminals: TerminalSet,
    d_k: Vec<f64>,
    rows: Vec<Vec<f64>>,
    row_of: Vec<Option<usize>>,
}

impl<'g> GraphicEngine<'g> {
    pub fn new(graph: &'g WeightedGraph, terminals: &TerminalSet) -> Result<Self> {
        graph.ensure_connected()?;
        let d_k = terminal_distances(graph, terminals)?;
        let rows = terminals.iter().map(|t| dijkstra_multi(graph, &[t])).collect();
        Ok(GraphicEngine {
            graph,
            terminals: terminals.clone(),
            d_k,
            rows,
            row_of: terminals.index_map(graph.n()),
        })
    }

    pub fn graph(&self) -> &WeightedGraph {
        self.graph
    }

    pub fn terminal_distances(&self) -> &[f64] {
        &self.d_k
    }

    /// Shortest-path distances from terminal `t` to every vertex.
    pub fn row(&self, t: usize) -> &[f64] {
        &self.rows[self.row_of[t].expect("not a terminal")]
    }

    /// Runs the engine with order `pi` (a permutation of the engine's
    /// terminals) and magnitudes indexed by position in `pi`.
    pub fn run(
        &self,
        pi: &TerminalSet,
        magnitudes: &MagnitudeVector,
        frontier: Frontier,
    ) -> Result<TerminalPartition> {
        if !pi.same_elements(&self.terminals) {
            return Err(Error::Config("ordering is not a permutation of the engine's terminals".into()));
        }
        if magnitudes.len() != pi.len() {
            return Err(Error::SizeMismatch(format!(
                "{} magnitudes for {} terminals",
                magnitudes.len(),
                pi.len()
            )));
        }
        let n = self.graph.n();
        let mut unclustered = vec![true; n];
        let mut owner = vec![usize::MAX; n];
        for (j, t) in pi.iter().enumerate() {
            unclustered[t] = false;
            owner[t] = j;
        }
        for (j, t) in pi.iter().enumerate() {
            let cluster = create_cluster(
                self.graph,
                &unclustered,
                t,
                magnitudes.get(j),
                &self.d_k,
                self.row(t),
                frontier,
            );
            for v in cluster {
                unclustered[v] = false;
                owner[v] = j;
            }
        }
        TerminalPartition::from_owner(owner, pi.len())
    }
}

/// Graphic Relaxed-Voronoi on a connected graph with terminals in π order.
pub fn graphic_relaxed_voronoi(
    g: &WeightedGraph,
    terminals: &TerminalSet,
    magnitudes: &MagnitudeVector,
) -> Result<TerminalPartition> {
    graphic_relaxed_voronoi_with(g, terminals, magnitudes, Frontier::Fifo)
}

pub fn graphic_relaxed_voronoi_with(
    g: &WeightedGraph,
    terminals: &TerminalSet,
    magnitudes: &MagnitudeVector,
    frontier: Frontier,
) -> Result<TerminalPartition> {
    let partition = GraphicEngine::new(g, terminals)?.run(terminals, magnitudes, frontier)?;
    if ValidationLevel::from_env().enabled() {
        partition.validate(g, terminals)?;
    }
    Ok(partition)
}

/// Metric Relaxed-Voronoi: in π order, `t_j` takes every unmapped `x` with
/// `d(t_j, x) <= R_j * D(x)`.
pub fn metric_relaxed_voronoi(
    m: &MetricSpace,
    terminals: &TerminalSet,
    magnitudes: &MagnitudeVector,
) -> Result<Retraction> {
    if magnitudes.len() != terminals.len() {
        return Err(Error::SizeMismatch(format!(
            "{} magnitudes for {} terminals",
            magnitudes.len(),
            terminals.len()
        )));
    }
    let d_k = m.terminal_distances(terminals)?;
    let mut assignment = vec![usize::MAX; m.n()];
    let mut unmapped = m.n();
    for (j, t) in terminals.iter().enumerate() {
        let r = magnitudes.get(j);
        let row = m.row(t);
        for x in 0..m.n() {
            if assignment[x] == usize::MAX && row[x] <= r * d_k[x] {
                assignment[x] = t;
                unmapped -= 1;
            }
        }
        if unmapped == 0 {
            break;
        }
    }
    debug_assert_eq!(unmapped, 0, "R_j >= 1 leaves no point unmapped");
    Ok(Retraction { assignment })
}

/// Each point to its nearest terminal, ties to the earliest in π.
pub fn voronoi_baseline(m: &MetricSpace, terminals: &TerminalSet) -> Result<Retraction> {
    if terminals.is_empty() {
        return Err(Error::NoTerminals);
    }
    terminals.check_bounds(m.n())?;
    let assignment = (0..m.n())
        .map(|x| {
            let mut best = terminals.get(0);
            for t in terminals.iter().skip(1) {
                if m.dist(x, t) < m.dist(x, best) {
                    best = t;
                }
            }
            best
        })
        .collect();
    Ok(Retraction { assignment })
}

/// The minor obtained by contracting each cluster onto its terminal.
/// Vertex `i` of the minor is the i-th terminal in π.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InducedMinor {
    pub k: usize,
    /// `(i, j, d_G(t_i, t_j))` with `i < j`, sorted.
    pub edges: Vec<(usize, usize, f64)>,
}

impl InducedMinor {
    pub fn to_graph(&self) -> Result<WeightedGraph> {
        WeightedGraph::new(self.k, self.edges.iter().map(|&(i, j, w)| Edge::new(i, j, w)).collect())
    }

    /// All-pairs `d_M`, one Dijkstra per minor vertex.
    pub fn distances(&self) -> Result<Vec<Vec<f64>>> {
        let g = self.to_graph()?;
        Ok((0..self.k).map(|i| dijkstra_multi(&g, &[i])).collect())
    }
}

/// Pairs of clusters joined by at least one edge of `g`.
pub(crate) fn adjacent_cluster_pairs(g: &WeightedGraph, p: &TerminalPartition) -> BTreeSet<(usize, usize)> {
    g.edges()
        .iter()
        .filter_map(|e| {
            let (a, b) = (p.owner[e.u], p.owner[e.v]);
            (a != b).then(|| (a.min(b), a.max(b)))
        })
        .collect()
}

/// Contracts a valid terminal partition. Edge weights are the original
/// terminal distances `d_G(t_i, t_j)`, not the crossing edge weights.
pub fn induce_minor(
    g: &WeightedGraph,
    terminals: &TerminalSet,
    p: &TerminalPartition,
) -> Result<InducedMinor> {
    p.validate(g, terminals)?;
    let rows: Vec<Vec<f64>> = terminals.iter().map(|t| dijkstra_multi(g, &[t])).collect();
    let edges = adjacent_cluster_pairs(g, p)
        .into_iter()
        .map(|(i, j)| (i, j, rows[i][terminals.get(j)]))
        .collect();
    Ok(InducedMinor { k: terminals.len(), edges })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_path(n: usize) -> WeightedGraph {
        WeightedGraph::new(n, (0..n - 1).map(|i| Edge::new(i, i + 1, 1.0)).collect()).unwrap()
    }

    #[test]
    fn all_terminals_are_singletons() {
        let g = unit_path(4);
        let k = TerminalSet::new(vec![2, 0, 3, 1], 4).unwrap();
        let r = MagnitudeVector::constant(3.0, 4).unwrap();
        let p = graphic_relaxed_voronoi(&g, &k, &r).unwrap();
        assert_eq!(p.clusters, vec![vec![2], vec![0], vec![3], vec![1]]);
    }

    #[test]
    fn star_center_joins_first_terminal() {
        let g = WeightedGraph::new(
            4,
            vec![Edge::new(0, 1, 1.0), Edge::new(0, 2, 1.0), Edge::new(0, 3, 1.0)],
        )
        .unwrap();
        for order in [vec![1, 2, 3], vec![3, 1, 2], vec![2, 3, 1]] {
            let k = TerminalSet::new(order.clone(), 4).unwrap();
            let p = graphic_relaxed_voronoi(&g, &k, &MagnitudeVector::constant(3.0, 3).unwrap()).unwrap();
            assert_eq!(p.clusters[0], {
                let mut c = vec![0, order[0]];
                c.sort();
                c
            });
        }
    }

    #[test]
    fn create_cluster_stops_at_failing_frontier() {
        // t=0 -- 1 -- 2 with terminal 3 hanging off 1 at distance 0.5
        let g = WeightedGraph::new(
            4,
            vec![Edge::new(0, 1, 1.0), Edge::new(1, 2, 1.0), Edge::new(1, 3, 0.5)],
        )
        .unwrap();
        let k = TerminalSet::new(vec![0, 3], 4).unwrap();
        let d_k = terminal_distances(&g, &k).unwrap();
        let row = dijkstra_multi(&g, &[0]);
        let unclustered = [false, true, true, false];
        // d(1,0)=1 > 1.5*0.5, so nothing joins
        assert_eq!(create_cluster(&g, &unclustered, 0, 1.5, &d_k, &row, Frontier::Fifo), vec![0]);
        // d(1,0)=1 <= 2*0.5 joins; d(2,0)=2 <= 2*1.5 joins
        let mut c = create_cluster(&g, &unclustered, 0, 2.0, &d_k, &row, Frontier::Lifo);
        c.sort();
        assert_eq!(c, vec![0, 1, 2]);
    }

    #[test]
    fn path_minor() {
        let g = unit_path(3);
        let k = TerminalSet::new(vec![0, 2], 3).unwrap();
        let p = TerminalPartition::from_clusters(vec![vec![0, 1], vec![2]], 3).unwrap();
        let minor = induce_minor(&g, &k, &p).unwrap();
        assert_eq!(minor.edges, vec![(0, 1, 2.0)]);

        let single = TerminalSet::new(vec![1], 3).unwrap();
        let p = TerminalPartition::from_clusters(vec![vec![0, 1, 2]], 3).unwrap();
        let minor = induce_minor(&g, &single, &p).unwrap();
        assert_eq!(minor.k, 1);
        assert!(minor.edges.is_empty());
    }

    #[test]
    fn invalid_partitions_are_reported() {
        let g = unit_path(4);
        let k = TerminalSet::new(vec![0, 3], 4).unwrap();
        // cluster {0, 2} is disconnected
        let p = TerminalPartition::from_clusters(vec![vec![0, 2], vec![1, 3]], 4).unwrap();
        let err = induce_minor(&g, &k, &p).unwrap_err();
        assert!(matches!(err, Error::InvalidPartition(ref m) if m.contains("disconnected")));
        // terminal in the wrong cluster
        let p = TerminalPartition::from_clusters(vec![vec![1, 2, 3], vec![0]], 4).unwrap();
        assert!(p.validate(&g, &k).is_err());
        assert!(TerminalPartition::from_clusters(vec![vec![0, 1], vec![1, 2, 3]], 4).is_err());
        assert!(TerminalPartition::from_clusters(vec![vec![0, 1], vec![3]], 4).is_err());
    }

    #[test]
    fn metric_engine_voronoi_ties_go_to_first_terminal() {
        let m = MetricSpace::from_fn(3, Default::default(), |a, b| a.abs_diff(b) as f64).unwrap();
        let k = TerminalSet::new(vec![2, 0], 3).unwrap();
        let ones = MagnitudeVector::constant(1.0, 2).unwrap();
        let f = metric_relaxed_voronoi(&m, &k, &ones).unwrap();
        assert_eq!(f.assignment, vec![0, 2, 2]);
        assert_eq!(voronoi_baseline(&m, &k).unwrap(), f);
        f.validate(&k).unwrap();
    }

    #[test]
    fn single_terminal_takes_everything() {
        let m = MetricSpace::from_fn(5, Default::default(), |a, b| a.abs_diff(b) as f64).unwrap();
        let k = TerminalSet::new(vec![3], 5).unwrap();
        let r = MagnitudeVector::constant(1.0, 1).unwrap();
        assert_eq!(metric_relaxed_voronoi(&m, &k, &r).unwrap().assignment, vec![3; 5]);
        assert_eq!(voronoi_baseline(&m, &k).unwrap().assignment, vec![3; 5]);
    }

    #[test]
    fn magnitude_count_must_match() {
        let m = MetricSpace::from_fn(3, Default::default(), |a, b| a.abs_diff(b) as f64).unwrap();
        let k = TerminalSet::new(vec![0, 2], 3).unwrap();
        let r = MagnitudeVector::constant(1.0, 1).unwrap();
        assert!(matches!(metric_relaxed_voronoi(&m, &k, &r), Err(Error::SizeMismatch(_))));
    }
}
