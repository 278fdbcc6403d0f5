//! Any connected terminal partition can be contracted into a minor; here a
//! hand-made one on a 4×4 grid is compared with the one the engine produces.
//!
//! ```text
//! cargo run --example minor_from_partition
//! ```

use relaxed_voronoi::generators::grid_graph;
use relaxed_voronoi::{
    graphic_relaxed_voronoi, induce_minor, minor_distortion, MagnitudeVector, TerminalPartition, TerminalSet,
};

fn main() -> relaxed_voronoi::Result<()> {
    // vertex r*4 + c; terminals at two opposite corners and the inner cell 5
    let g = grid_graph(4)?;
    let terminals = TerminalSet::new(vec![0, 15, 5], 16)?;

    let by_hand = TerminalPartition::from_clusters(
        vec![vec![0, 1, 2, 3, 4, 6, 8, 12], vec![15, 14, 13, 11, 10, 9, 7], vec![5]],
        16,
    )?;
    let engine = graphic_relaxed_voronoi(&g, &terminals, &MagnitudeVector::constant(1.5, 3)?)?;

    for (name, partition) in [("by hand", by_hand), ("engine", engine)] {
        let minor = induce_minor(&g, &terminals, &partition)?;
        let report = minor_distortion(&g, &terminals, &minor)?;
        println!("{name}: clusters {:?}", partition.clusters);
        println!("    minor edges {:?}, distortion {:.3}", minor.edges, report.max_distortion);
    }
    Ok(())
}
