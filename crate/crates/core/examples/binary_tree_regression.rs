//! Steiner point removal on the complete binary tree of height 6, with the
//! 64 leaves as terminals and the root as the ordering root.
//!
//! Two sibling-adjacent leaves can end up joined in the minor only through a
//! detour, which makes this tree a good sanity check for the distortion
//! machinery.
//!
//! ```text
//! cargo run --example binary_tree_regression
//! ```

use relaxed_voronoi::generators::{binary_tree_leaves, complete_binary_tree};
use relaxed_voronoi::{minor_distortion, spr_tree, TerminalSet};

fn main() -> relaxed_voronoi::Result<()> {
    let tree = complete_binary_tree(6)?;
    let terminals = TerminalSet::new(binary_tree_leaves(6), tree.n())?;
    let out = spr_tree(&tree, &terminals)?;
    let report = minor_distortion(tree.graph(), &out.order, &out.minor)?;

    let (a, b) = (63, 59);
    println!("{} vertices, {} terminals, root {}", tree.n(), terminals.len(), tree.root());
    println!(
        "pair (t_{}, t_{}) = vertices ({}, {}): minor/tree distance ratio {:.4}",
        a + 1,
        b + 1,
        out.order.get(a),
        out.order.get(b),
        report.pair(a, b).unwrap()
    );
    println!("worst pair {:?}, distortion {:.4} (bound 8)", report.argmax_terminals, report.max_distortion);
    println!("edge touches {} for n = {}", out.touches.total(), tree.n());
    Ok(())
}
