//! Terminal orderings π.
//!
//! Ties are always broken towards the lower vertex id so that every ordering
//! is a deterministic function of its input.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{shortest_paths_from, terminal_rows, WeightedGraph};
use crate::metric::MetricSpace;
use crate::terminals::TerminalSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum OrderingPolicy {
    /// Keep the order in which the terminals were supplied.
    #[default]
    GivenOrder,
    /// Increasing distance from `root`.
    RootDistance(usize),
    /// Farthest-first traversal; `None` starts from the lowest-id terminal.
    Gonzalez(Option<usize>),
}

impl OrderingPolicy {
    pub fn order_graph(&self, g: &WeightedGraph, terminals: &TerminalSet) -> Result<TerminalSet> {
        match *self {
            OrderingPolicy::GivenOrder => Ok(terminals.clone()),
            OrderingPolicy::RootDistance(root) => root_distance_order(g, terminals, root),
            OrderingPolicy::Gonzalez(start) => {
                let rows = terminal_rows(g, terminals)?;
                let index = terminals.index_map(g.n());
                gonzalez_by(terminals, start, |a, b| {
                    rows[index[a].expect("terminal")][b]
                })
            }
        }
    }

    pub fn order_metric(&self, m: &MetricSpace, terminals: &TerminalSet) -> Result<TerminalSet> {
        match *self {
            OrderingPolicy::GivenOrder => Ok(terminals.clone()),
            OrderingPolicy::RootDistance(root) => {
                if root >= m.n() {
                    return Err(Error::VertexOutOfRange { vertex: root, n: m.n() });
                }
                terminals.check_bounds(m.n())?;
                Ok(sort_by_key_then_id(terminals, m.row(root)))
            }
            OrderingPolicy::Gonzalez(start) => gonzalez_order(m, terminals, start),
        }
    }
}

impl fmt::Display for OrderingPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderingPolicy::GivenOrder => write!(f, "given"),
            OrderingPolicy::RootDistance(r) => write!(f, "root:{r}"),
            OrderingPolicy::Gonzalez(None) => write!(f, "gonzalez"),
            OrderingPolicy::Gonzalez(Some(s)) => write!(f, "gonzalez:{s}"),
        }
    }
}

impl FromStr for OrderingPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("unknown ordering `{s}`"));
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        let id = |a: &str| a.trim().parse::<usize>().map_err(|_| bad());
        match (head, arg) {
            ("given", None) => Ok(OrderingPolicy::GivenOrder),
            ("root", Some(a)) => Ok(OrderingPolicy::RootDistance(id(a)?)),
            ("gonzalez", None) => Ok(OrderingPolicy::Gonzalez(None)),
            ("gonzalez", Some(a)) => Ok(OrderingPolicy::Gonzalez(Some(id(a)?))),
            _ => Err(bad()),
        }
    }
}

fn sort_by_key_then_id(terminals: &TerminalSet, key: &[f64]) -> TerminalSet {
    let mut order: Vec<usize> = terminals.iter().collect();
    order.sort_by(|&a, &b| key[a].total_cmp(&key[b]).then(a.cmp(&b)));
    TerminalSet::reordered(order)
}

/// Terminals sorted by distance from `root`, ties to the lower id.
pub fn root_distance_order(
    g: &WeightedGraph,
    terminals: &TerminalSet,
    root: usize,
) -> Result<TerminalSet> {
    terminals.check_bounds(g.n())?;
    let dist = shortest_paths_from(g, root)?;
    Ok(sort_by_key_then_id(terminals, &dist))
}

/// Gonzalez's farthest-first order of the terminals starting at `start`
/// (default: the lowest-id terminal).
pub fn gonzalez_order(
    m: &MetricSpace,
    terminals: &TerminalSet,
    start: Option<usize>,
) -> Result<TerminalSet> {
    terminals.check_bounds(m.n())?;
    gonzalez_by(terminals, start, |a, b| m.dist(a, b))
}

fn gonzalez_by(
    terminals: &TerminalSet,
    start: Option<usize>,
    dist: impl Fn(usize, usize) -> f64,
) -> Result<TerminalSet> {
    let start = match start {
        Some(s) if terminals.contains(s) => s,
        Some(s) => return Err(Error::NotATerminal(s)),
        None => terminals.iter().min().ok_or(Error::NoTerminals)?,
    };

    // remaining terminals sorted by id, so a strict `>` scan keeps the lowest id on ties
    let mut remaining: Vec<usize> = terminals.iter().filter(|&t| t != start).collect();
    remaining.sort_unstable();
    let mut gap: Vec<f64> = remaining.iter().map(|&t| dist(start, t)).collect();

    let mut order = Vec::with_capacity(terminals.len());
    order.push(start);
    while !remaining.is_empty() {
        let mut best = 0;
        for i in 1..remaining.len() {
            if gap[i] > gap[best] {
                best = i;
            }
        }
        let next = remaining.remove(best);
        gap.remove(best);
        for (t, g) in remaining.iter().zip(gap.iter_mut()) {
            *g = g.min(dist(next, *t));
        }
        order.push(next);
    }
    Ok(TerminalSet::reordered(order))
}
