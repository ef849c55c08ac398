//! Validate a cactus, inspect its cycle decomposition and 2-edge-cuts.
//!
//! ```bash
//! cargo run -p cacaug --example validate_and_cuts
//! ```

use cacaug::cactus::{covers, enumerate_two_edge_cuts};
use cacaug::samples;

fn main() {
    let instance = samples::cactus12();
    let graph = &instance.graph;
    println!(
        "cactus with {} nodes, {} edges, {} links",
        graph.node_count,
        graph.edges.len(),
        instance.links.len()
    );
    for (i, cycle) in graph.cycles.iter().enumerate() {
        println!("cycle {i}: nodes {:?} (length {})", cycle.nodes, cycle.len());
    }
    println!("degree-2 nodes (the future terminals): {:?}", graph.degree_two_nodes());

    let cuts = enumerate_two_edge_cuts(graph);
    println!("\n{} two-edge cuts; every cut must be covered by some link:", cuts.len());
    for cut in cuts.iter().take(5) {
        let covering: Vec<usize> = (0..instance.links.len())
            .filter(|&l| covers(cut, instance.links[l]))
            .collect();
        println!(
            "  edges ({}, {}) split off {:?}; covered by links {covering:?}",
            cut.edge_a, cut.edge_b, cut.left
        );
    }
    println!("  ... ({} more)", cuts.len() - 5);
    println!("\nfull link set feasible: {}", instance.is_feasible());
}
