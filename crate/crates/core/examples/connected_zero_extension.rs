//! Connected 0-extension on a sparse random graph: every cluster is a
//! connected subgraph, so contracting the clusters yields a minor.
//!
//! ```text
//! cargo run --release --example connected_zero_extension
//! ```

use relaxed_voronoi::evaluation::{EngineConfig, Instance, StretchOptions};
use relaxed_voronoi::generators::{random_connected_graph, random_terminals, DEFAULT_WEIGHTS};
use relaxed_voronoi::{
    expected_stretch, graphic_relaxed_voronoi, induce_minor, minor_distortion, MagnitudePolicy, OrderingPolicy,
};

fn main() -> relaxed_voronoi::Result<()> {
    let graph = random_connected_graph(200, 400, DEFAULT_WEIGHTS, 11)?;
    let terminals = random_terminals(200, 16, 12)?;
    let policy = MagnitudePolicy::log_k(5.0);

    let magnitudes = policy.sample(terminals.len(), 0)?;
    let partition = graphic_relaxed_voronoi(&graph, &terminals, &magnitudes)?;
    partition.validate(&graph, &terminals)?;
    let sizes: Vec<usize> = partition.clusters.iter().map(Vec::len).collect();
    println!("cluster sizes {sizes:?}");

    let minor = induce_minor(&graph, &terminals, &partition)?;
    let report = minor_distortion(&graph, &terminals, &minor)?;
    println!("minor has {} edges, distortion {:.3}", minor.edges.len(), report.max_distortion);

    let instance = Instance::Graph { graph, terminals };
    let config = EngineConfig { ordering: OrderingPolicy::GivenOrder, magnitudes: policy };
    let stretch = expected_stretch(&instance, &config, &StretchOptions { trials: 200, seed: 5, ..Default::default() })?;
    println!("max expected edge stretch over 200 trials: {:.3}", stretch.max_mean_stretch);
    Ok(())
}
