//! Reduce an augmentation instance to its Steiner tree instance: project
//! links onto cycles, find crossing pairs, and build the bipartite-ish
//! graph on terminals and links.
//!
//! ```bash
//! cargo run -p cacaug --example reduce_to_steiner
//! ```

use cacaug::reduction::{build_steiner_instance, links_cross, project_link};
use cacaug::samples;

fn main() {
    let instance = samples::cactus12();
    for link in 0..instance.links.len() {
        let segments: Vec<String> = project_link(&instance, link)
            .iter()
            .map(|p| format!("({}, {}) on cycle {}", p.segment.0, p.segment.1, p.cycle))
            .collect();
        println!(
            "link {link} = {:?} projects to [{}]",
            instance.links[link],
            segments.join(", ")
        );
    }

    println!("\ncrossing pairs (shared projection endpoint or interleaving):");
    for a in 0..instance.links.len() {
        for b in (a + 1)..instance.links.len() {
            if links_cross(&instance, a, b) {
                println!("  links {a} and {b} cross");
            }
        }
    }

    let st = build_steiner_instance(&instance).unwrap();
    println!(
        "\nSteiner instance: {} terminals, {} Steiner nodes, {} edges",
        st.terminal_count(),
        st.steiner_count(),
        st.edges().len()
    );
    println!("{}", cacaug::io::write_steiner_instance(&st));
}
