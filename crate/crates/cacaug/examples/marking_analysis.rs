//! The marking scheme under the microscope: witness sets two ways, exact
//! expected costs against full enumeration, classification, grouping and
//! the averaged bound.
//!
//! ```bash
//! cargo run -p cacaug --example marking_analysis
//! ```

use cacaug::bounds;
use cacaug::marking::{
    build_groups, classify, expected_cost_exact, expected_costs_by_enumeration, sample_marking,
    tree_bound, witness_sets, witness_tree,
};
use cacaug::rng::SplitMix64;
use cacaug::samples;

fn main() {
    let tree = samples::steiner17();
    println!(
        "tree: {} Steiner nodes, {} terminals, root {}",
        tree.steiner_count(),
        tree.terminal_count(),
        tree.root()
    );

    let mut rng = SplitMix64::new(2);
    let marking = sample_marking(&tree, &mut rng).unwrap();
    let sets = witness_sets(&tree, &marking);
    let wt = witness_tree(&tree, &marking);
    println!(
        "sampled marking: witness tree has {} edges; sets agree across both routes: {}",
        wt.edges.len(),
        sets == wt.witness_sets_via_paths(&tree)
    );

    println!("\nper-node expected cost E[H_w] (formula vs enumeration):");
    let oracle = expected_costs_by_enumeration(&tree).unwrap();
    for v in tree.steiner_nodes() {
        let formula = expected_cost_exact(&tree, v).unwrap();
        println!(
            "  node {v}: {:.12} vs {:.12}  (cap hhat_{} = {:.12})",
            formula.value,
            oracle[&v].value,
            tree.d(v),
            bounds::h_hat_f64(tree.d(v) as u64)
        );
    }

    let class = classify(&tree);
    let grouping = build_groups(&tree).unwrap();
    println!("\ngood fathers: {:?}", collect(&tree, &class.good_father));
    println!("good nodes:   {:?}", collect(&tree, &class.good));
    println!("leaf-Steiner: {:?}", collect(&tree, &class.leaf_steiner));
    for (v, members) in &grouping.groups {
        println!("group of {v}: {:?}", members);
    }
    println!("leftover leaf: {}", grouping.leftover);

    let (p_star, rho) = bounds::optimal_present_and_constant();
    let bound = tree_bound(&tree, p_star).unwrap();
    println!(
        "\naveraged bound at p* = {p_star:.6}: case bound {:.12}, true average {:.12}, rho {:.12}",
        bound.case_bound, bound.true_average, rho
    );
}

fn collect(tree: &cacaug::marking::RootedSteinerTree, flags: &[bool]) -> Vec<usize> {
    tree.steiner_nodes().filter(|&v| flags[v]).collect()
}
