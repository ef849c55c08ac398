//! The LP-based rounding pipeline: enumerate directed components, solve
//! the covering LP, then iterate sample-and-contract until the terminals
//! merge into one class.
//!
//! ```bash
//! cargo run -p cacaug --example lp_rounding
//! ```

use cacaug::dcr::{build_dcr_lp, enumerate_components, solve_lp};
use cacaug::irr::{iterative_randomized_rounding, solve_cacap};
use cacaug::reduction::build_steiner_instance;
use cacaug::samples;

fn main() {
    let instance = samples::cactus12();
    let st = build_steiner_instance(&instance).unwrap();

    for k in [2usize, 3, 4] {
        let components = enumerate_components(&st, k).unwrap();
        let count = components.len();
        let program = build_dcr_lp(components, st.terminal_count(), 0).unwrap();
        let solution = solve_lp(&program).unwrap();
        println!(
            "k={k}: {count} components, {} covering rows, LP optimum {:.4}",
            program.row_count(),
            solution.objective
        );
    }

    println!("\nsingle rounding run (k=3, seed=7):");
    let tree = iterative_randomized_rounding(&st, 3, 7).unwrap();
    println!("  rounded tree cost {}", tree.cost());

    println!("\nfull pipeline, best of 8 runs with pruning:");
    let outcome = solve_cacap(&instance, 3, 7, 8, true).unwrap();
    println!(
        "  links {:?} (cost {}, optimum {:?})",
        outcome.links,
        outcome.links.len(),
        outcome.report.optimum
    );
    println!("  per-run costs: {:?}", outcome.report.per_run_costs);
}
