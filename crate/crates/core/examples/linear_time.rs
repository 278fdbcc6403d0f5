//! Times the tree pipeline at doubling sizes and prints the edge-touch count
//! per vertex, which never exceeds 4.
//!
//! ```text
//! cargo run --release --example linear_time
//! ```

use std::time::Instant;

use relaxed_voronoi::generators::{random_terminals, random_tree, DEFAULT_WEIGHTS};
use relaxed_voronoi::tree_fast::{spr_tree_with, SprTreeConfig};
use relaxed_voronoi::{RootedTree, ValidationLevel};

fn main() -> relaxed_voronoi::Result<()> {
    let config = SprTreeConfig { magnitude: 3.0, validation: ValidationLevel::Off };
    let mut previous: Option<f64> = None;
    for n in [125_000usize, 250_000, 500_000, 1_000_000] {
        let tree = RootedTree::new(random_tree(n, DEFAULT_WEIGHTS, 1)?, 0)?;
        let terminals = random_terminals(n, n / 10, 2)?;
        spr_tree_with(&tree, &terminals, &config)?;
        let runs = 5;
        let mut total = 0.0;
        let mut touches = 0;
        for _ in 0..runs {
            let started = Instant::now();
            let out = spr_tree_with(&tree, &terminals, &config)?;
            total += started.elapsed().as_secs_f64();
            touches = out.touches.total();
        }
        let mean_ms = total / runs as f64 * 1e3;
        let ratio = previous.map(|p| format!("{:.2}", mean_ms / p)).unwrap_or_else(|| "-".into());
        println!("n = {n:>9}: {mean_ms:>8.1} ms, ratio {ratio:>5}, touches/n {:.3}", touches as f64 / n as f64);
        previous = Some(mean_ms);
    }
    Ok(())
}
