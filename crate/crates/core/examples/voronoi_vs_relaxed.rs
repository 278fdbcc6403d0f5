//! With every magnitude equal to 1 the engine is an ordinary Voronoi
//! assignment. Larger magnitudes let early terminals claim more points.
//!
//! ```text
//! cargo run --example voronoi_vs_relaxed
//! ```

use relaxed_voronoi::generators::{random_euclidean_metric, random_terminals};
use relaxed_voronoi::{metric_relaxed_voronoi, voronoi_baseline, MagnitudeVector};

fn main() -> relaxed_voronoi::Result<()> {
    let metric = random_euclidean_metric(400, 1)?;
    let terminals = random_terminals(400, 10, 2)?;
    let voronoi = voronoi_baseline(&metric, &terminals)?;

    for r in [1.0, 1.25, 1.5, 2.0, 3.0] {
        let f = metric_relaxed_voronoi(&metric, &terminals, &MagnitudeVector::constant(r, terminals.len())?)?;
        let moved = (0..metric.n()).filter(|&x| f.image(x) != voronoi.image(x)).count();
        let to_first = (0..metric.n()).filter(|&x| f.image(x) == terminals.get(0)).count();
        println!("R = {r:<4}: {moved:>3} points differ from Voronoi, first terminal claims {to_first}");
    }
    Ok(())
}
