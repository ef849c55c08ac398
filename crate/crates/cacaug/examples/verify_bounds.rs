//! Numeric verification of every constant in the analysis: harmonic
//! tails, the four group-average functions, the optimal present and the
//! final ratio, with a symbolic identity check in `q0 + q1 ln 4` form.
//!
//! ```bash
//! cargo run -p cacaug --example verify_bounds
//! ```

use cacaug::bounds::{
    h_hat_f64, optimal_present_and_constant, optimal_present_and_constant_symbolic,
    run_full_verification,
};

fn main() {
    println!("geometric harmonic tail:");
    for i in 1..=8u64 {
        println!("  hhat_{i} = {:.10}", h_hat_f64(i));
    }

    let (p_star, rho) = optimal_present_and_constant();
    let (p_sym, rho_sym) = optimal_present_and_constant_symbolic();
    println!("\noptimal present p* = {p_star:.12}");
    println!("ratio rho = {rho:.12} < 1.9092");
    println!("exact forms: p* = {} + {} ln4, rho = {} + {} ln4",
        p_sym.q0, p_sym.q1, rho_sym.q0, rho_sym.q1);

    println!("\nfull verification (grid 1e-3, i up to 2000):");
    let report = run_full_verification(1e-3, 2000, 2000, 0);
    for check in &report.checks {
        println!(
            "  {} {} (residual {:.3e})",
            if check.pass { "pass" } else { "FAIL" },
            check.name,
            check.residual
        );
    }
    println!("argmax of a1..a4 over the grid: {:?}", report.claim_max_argmax);
    assert!(report.all_pass());
}
