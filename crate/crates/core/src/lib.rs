//! Relaxed-Voronoi terminal clustering.
//!
//! Given a graph or metric with terminals `K`, every terminal in turn claims
//! the unclaimed points that lie within a factor `R_j` of their distance to
//! the nearest terminal. Choosing the terminal order and the magnitudes `R_j`
//! gives three algorithms:
//!
//! * **Steiner point removal on trees** ([`tree_fast::spr_tree`]): order by
//!   distance from a root, all `R_j = 3`. The induced minor has distortion at
//!   most 8 and the whole pipeline runs in linear time.
//! * **Metric 0-extension** ([`clustering::metric_relaxed_voronoi`]):
//!   Gonzalez order with `R_j = 2·e^{Z_j}`, `Z_j` exponential at scale
//!   `c·ddim`.
//! * **Connected metric 0-extension**
//!   ([`clustering::graphic_relaxed_voronoi`]): any order with
//!   `R_j = e^{Z_j}`, `Z_j` exponential at scale `c·ln k`.
//!
//! [`evaluation`] measures exact minor distortion and Monte-Carlo expected
//! stretch.

pub mod cli;
pub mod clustering;
pub mod error;
pub mod evaluation;
pub mod generators;
pub mod graph;
pub mod io;
pub mod magnitudes;
pub mod metric;
pub mod orderings;
pub mod terminals;
pub mod tree_fast;
pub mod validation;

pub use clustering::{
    create_cluster, graphic_relaxed_voronoi, graphic_relaxed_voronoi_with, induce_minor,
    metric_relaxed_voronoi, voronoi_baseline, Frontier, GraphicEngine, InducedMinor, Retraction,
    TerminalPartition,
};
pub use error::{Error, Result};
pub use evaluation::{expected_stretch, floyd_warshall, minor_distortion, DistortionReport, StretchReport};
pub use graph::{shortest_paths_from, terminal_distances, Edge, WeightedGraph, UNREACHABLE};
pub use magnitudes::{MagnitudePolicy, MagnitudeVector};
pub use metric::{metric_from_graph, MetricSpace};
pub use orderings::{gonzalez_order, root_distance_order, OrderingPolicy};
pub use terminals::TerminalSet;
pub use tree_fast::{spr_tree, tree_root_distances, tree_terminal_distances, RootedTree};
pub use validation::ValidationLevel;
