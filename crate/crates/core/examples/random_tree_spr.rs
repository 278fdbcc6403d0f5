//! Steiner point removal on random trees from several roots.
//!
//! ```text
//! cargo run --example random_tree_spr -- 500 40
//! ```
//! Arguments: tree size and terminal count (defaults 300 and 30).

use relaxed_voronoi::generators::{random_terminals, random_tree, DEFAULT_WEIGHTS};
use relaxed_voronoi::{minor_distortion, spr_tree, RootedTree};

fn main() -> relaxed_voronoi::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().expect("expected a number"));
    let n = args.next().unwrap_or(300);
    let k = args.next().unwrap_or(30);

    let g = random_tree(n, DEFAULT_WEIGHTS, 7)?;
    let terminals = random_terminals(n, k, 8)?;
    let mut tree = RootedTree::new(g.clone(), 0)?;
    for root in [0, n / 3, n - 1] {
        if root != tree.root() {
            tree = tree.rerooted(root)?;
        }
        let out = spr_tree(&tree, &terminals)?;
        let report = minor_distortion(&g, &out.order, &out.minor)?;
        let largest = out.partition.clusters.iter().map(Vec::len).max().unwrap_or(0);
        println!(
            "root {root:>4}: first terminal {:>4}, minor edges {}, largest cluster {largest}, distortion {:.3}",
            out.order.get(0),
            out.minor.edges.len(),
            report.max_distortion
        );
    }
    Ok(())
}
