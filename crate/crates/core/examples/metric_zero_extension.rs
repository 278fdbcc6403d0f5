//! Metric 0-extension on a 32×32 L1 grid.
//!
//! The doubling dimension is estimated from the metric, terminals are put in
//! farthest-first order, and the magnitudes are random. One sampled
//! retraction is shown, then the expected stretch over 100 trials.
//!
//! ```text
//! cargo run --release --example metric_zero_extension
//! ```

use relaxed_voronoi::evaluation::{EngineConfig, Instance, StretchOptions};
use relaxed_voronoi::generators::{estimate_ddim, grid_metric, random_terminals};
use relaxed_voronoi::{expected_stretch, metric_relaxed_voronoi, MagnitudePolicy, OrderingPolicy};

fn main() -> relaxed_voronoi::Result<()> {
    let side = 32;
    let metric = grid_metric(side, 1.0)?;
    let terminals = random_terminals(side * side, 12, 3)?;
    let ddim = estimate_ddim(&metric)?;
    let policy = MagnitudePolicy::doubling(5.0, ddim);

    let order = OrderingPolicy::Gonzalez(None).order_metric(&metric, &terminals)?;
    let magnitudes = policy.sample(order.len(), 1)?;
    let f = metric_relaxed_voronoi(&metric, &order, &magnitudes)?;

    println!("estimated ddim {ddim:.3}");
    println!("order {:?}", order.as_slice());
    println!("magnitudes {:?}", magnitudes.as_slice().iter().map(|r| (r * 100.0).round() / 100.0).collect::<Vec<_>>());
    let mut sizes = vec![0usize; order.len()];
    let index = order.index_map(metric.n());
    for x in 0..metric.n() {
        sizes[index[f.image(x)].unwrap()] += 1;
    }
    println!("points per terminal, in processing order {sizes:?}");

    let instance = Instance::Metric { metric, terminals };
    let config = EngineConfig { ordering: OrderingPolicy::Gonzalez(None), magnitudes: policy };
    let report = expected_stretch(&instance, &config, &StretchOptions { trials: 100, seed: 42, ..Default::default() })?;
    println!(
        "expected stretch over {} sampled pairs: max {:.3} at {:?}",
        report.pairs.len(),
        report.max_mean_stretch,
        report.argmax_pair
    );
    Ok(())
}
