//! Seeded instance and tree generators plus the file formats: everything
//! reproduces bit-for-bit from the seed.
//!
//! ```bash
//! cargo run -p cacaug --example generate_instances
//! ```

use cacaug::gen::{gen_instance, gen_well_structured_tree};
use cacaug::io::{parse_instance, write_instance, write_tree};
use cacaug::irr::{greedy_cover, solve_cacap};

fn main() {
    for seed in 0..4u64 {
        let instance = gen_instance(3, 5, 4, seed);
        println!(
            "seed {seed}: {} nodes, {} edges, {} links, {} cuts, feasible {}",
            instance.graph.node_count,
            instance.graph.edges.len(),
            instance.links.len(),
            instance.graph.cuts().len(),
            instance.is_feasible()
        );
        let greedy = greedy_cover(&instance).unwrap();
        let outcome = solve_cacap(&instance, 3, seed, 6, true).unwrap();
        println!(
            "  greedy {} links, rounded {} links, optimum {:?}",
            greedy.len(),
            outcome.links.len(),
            outcome.report.optimum
        );
    }

    // Round trip through the text format.
    let instance = gen_instance(2, 4, 3, 11);
    let text = write_instance(&instance);
    println!("\ninstance file for seed 11:\n{text}");
    let parsed = parse_instance(&text).unwrap();
    assert_eq!(write_instance(&parsed.instance), text);

    let tree = gen_well_structured_tree(6, 3, 4);
    println!("well-structured tree for seed 4:\n{}", write_tree(&tree));
}
