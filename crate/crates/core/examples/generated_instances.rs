//! Instance families, the text format shared with the CLI, and doubling
//! dimension estimates.
//!
//! ```text
//! cargo run --example generated_instances
//! ```

use relaxed_voronoi::generators::{estimate_ddim, grid_metric, random_euclidean_metric, GeneratorSpec};
use relaxed_voronoi::io::{parse_instance, write_instance};
use relaxed_voronoi::metric_from_graph;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (family, rule) in [("btree:4", "leaves"), ("tree:60", "random:6"), ("graph:40,70", "random:5"), ("grid:6", "list:0,35")] {
        let spec = GeneratorSpec { family: family.parse()?, terminals: rule.parse()?, seed: 3 };
        let (g, k) = spec.generate()?;
        let text = write_instance(&g, &k);
        let (back, back_k) = parse_instance(&text)?;
        assert_eq!((back.n(), back.m(), back_k.len()), (g.n(), g.m(), k.len()));
        let ddim = estimate_ddim(&metric_from_graph(&g)?)?;
        println!("{spec_name:<12} n={:<4} m={:<4} k={:<3} ddim≈{ddim:.2}", g.n(), g.m(), k.len(), spec_name = spec.family);
    }
    for side in [8, 16, 24] {
        println!("grid {side}x{side}: ddim≈{:.2}", estimate_ddim(&grid_metric(side, 1.0)?)?);
    }
    println!("300 random points in the plane: ddim≈{:.2}", estimate_ddim(&random_euclidean_metric(300, 9)?)?);
    Ok(())
}
