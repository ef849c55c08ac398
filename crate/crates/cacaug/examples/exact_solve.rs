//! Ground-truth solvers: brute-force optimum over link subsets, exact
//! minimum Steiner tree, and the cost identity connecting them
//! (`|tree| = |optimum| + terminals - 1`).
//!
//! ```bash
//! cargo run -p cacaug --example exact_solve
//! ```

use cacaug::cactus::is_feasible_augmentation;
use cacaug::exact::{brute_force_cacap, dreyfus_wagner, exact_steiner};
use cacaug::reduction::{build_steiner_instance, embed_solution, lift_solution};
use cacaug::samples;

fn main() {
    let instance = samples::cactus12();
    let optimum = brute_force_cacap(&instance).unwrap();
    println!("brute-force optimum: {} links {:?}", optimum.len(), optimum);
    assert!(is_feasible_augmentation(&instance, &optimum));

    let st = build_steiner_instance(&instance).unwrap();
    let tree = exact_steiner(&st).unwrap();
    println!(
        "exact Steiner tree: {} edges over {} terminals",
        tree.cost(),
        st.terminal_count()
    );
    assert_eq!(tree.cost(), optimum.len() + st.terminal_count() - 1);
    println!(
        "identity holds: {} = {} + {} - 1",
        tree.cost(),
        optimum.len(),
        st.terminal_count()
    );

    // Dreyfus-Wagner on a terminal pair: adjacent terminals meet at the
    // link that touches both.
    let a = st.terminal_by_label(8).unwrap();
    let b = st.terminal_by_label(9).unwrap();
    let pair_tree = dreyfus_wagner(&st, &[a, b]).unwrap();
    println!("pair tree for labels 8, 9: cost {}", pair_tree.cost());

    // Embed a feasible link set and lift it back: a round trip.
    let all: Vec<usize> = (0..instance.links.len()).collect();
    let embedded = embed_solution(&st, &all).unwrap();
    let lifted = lift_solution(&st, &embedded.nodes).unwrap();
    println!(
        "embed/lift round trip over all links: {} edges -> {} links",
        embedded.cost(),
        lifted.len()
    );
    assert_eq!(lifted, all);
}
