//! Directed component relaxation restricted to components with at most `k`
//! terminals.
//!
//! A column is a minimum legal component tree over a terminal subset
//! (leaves exactly the subset) together with a designated sink terminal.
//! For a fixed root terminal `r`, every nonempty terminal set `U` avoiding
//! `r` contributes one covering row: some column must have a source inside
//! `U` and its sink outside. The resulting program is solved exactly by
//! the dense simplex; rows are enumerated explicitly, which caps the
//! instance size at 16 terminals.

use thiserror::Error;

use crate::exact::minimum_legal_component_tree;
use crate::simplex::{self, LpError};
use crate::steiner::{SteinerInstance, SteinerTreeSolution};

pub const MAX_TERMINALS: usize = 16;
pub const MIN_K: usize = 2;
pub const MAX_K: usize = 6;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DcrError {
    #[error("instance exceeds the LP caps ({0})")]
    TooLarge(String),
    #[error("no component crosses terminal set {0:#b}; instance infeasible")]
    InfeasibleRow(u64),
    #[error("LP solve failed: {0}")]
    Lp(#[from] LpError),
}

/// An LP column: component tree, its terminal slots, and the sink choice.
#[derive(Debug, Clone)]
pub struct DirectedComponent {
    /// Terminal slots of the instance, ascending. Sources are all but the sink.
    pub terminals: Vec<usize>,
    pub sink: usize,
    pub tree: SteinerTreeSolution,
    pub cost: usize,
}

impl DirectedComponent {
    pub fn sources(&self) -> impl Iterator<Item = usize> + '_ {
        let sink = self.sink;
        self.terminals.iter().copied().filter(move |&t| t != sink)
    }
}

/// All directed components with 2..=k terminals. One column per terminal
/// subset and sink choice, with the minimum-cost legal tree; subsets with
/// no legal component are skipped.
pub fn enumerate_components(
    st: &SteinerInstance,
    k: usize,
) -> Result<Vec<DirectedComponent>, DcrError> {
    if !(MIN_K..=MAX_K).contains(&k) {
        return Err(DcrError::TooLarge(format!("k = {k} outside {MIN_K}..={MAX_K}")));
    }
    let t = st.terminal_count();
    if t > MAX_TERMINALS {
        return Err(DcrError::TooLarge(format!(
            "{t} terminals > {MAX_TERMINALS}"
        )));
    }
    let mut out = Vec::new();
    let mut subset = Vec::new();
    enumerate_subsets(st, k.min(t), 0, &mut subset, &mut out);
    Ok(out)
}

fn enumerate_subsets(
    st: &SteinerInstance,
    k: usize,
    start: usize,
    subset: &mut Vec<usize>,
    out: &mut Vec<DirectedComponent>,
) {
    if subset.len() >= 2 {
        if let Some(tree) = minimum_legal_component_tree(st, subset) {
            let cost = tree.cost();
            for &sink in subset.iter() {
                out.push(DirectedComponent {
                    terminals: subset.clone(),
                    sink,
                    tree: tree.clone(),
                    cost,
                });
            }
        }
    }
    if subset.len() == k {
        return;
    }
    for v in start..st.terminal_count() {
        subset.push(v);
        enumerate_subsets(st, k, v + 1, subset, out);
        subset.pop();
    }
}

/// The covering program: explicit rows for every nonempty terminal subset
/// avoiding the root.
#[derive(Debug, Clone)]
pub struct DcrProgram {
    pub components: Vec<DirectedComponent>,
    pub root: usize,
    pub terminal_count: usize,
    /// Non-root terminal slots in bit order.
    pub bit_terminals: Vec<usize>,
}

/// A feasible fractional solution of the program.
#[derive(Debug, Clone)]
pub struct FractionalSolution {
    pub values: Vec<f64>,
    pub objective: f64,
}

impl FractionalSolution {
    pub fn total_mass(&self) -> f64 {
        self.values.iter().sum()
    }
}

pub fn build_dcr_lp(
    components: Vec<DirectedComponent>,
    terminal_count: usize,
    root: usize,
) -> Result<DcrProgram, DcrError> {
    if terminal_count > MAX_TERMINALS {
        return Err(DcrError::TooLarge(format!(
            "{terminal_count} terminals > {MAX_TERMINALS}"
        )));
    }
    let bit_terminals: Vec<usize> = (0..terminal_count).filter(|&t| t != root).collect();
    let program = DcrProgram {
        components,
        root,
        terminal_count,
        bit_terminals,
    };
    // Every row needs at least one crossing column.
    let rows = 1u64 << program.bit_terminals.len();
    for u_mask in 1..rows {
        if !program
            .components
            .iter()
            .any(|c| program.crosses(c, u_mask))
        {
            return Err(DcrError::InfeasibleRow(u_mask));
        }
    }
    Ok(program)
}

impl DcrProgram {
    /// Bit mask of a terminal slot within the non-root ordering.
    fn bit_of(&self, slot: usize) -> Option<u64> {
        self.bit_terminals
            .iter()
            .position(|&t| t == slot)
            .map(|i| 1u64 << i)
    }

    /// True when the component has a source in `u_mask` and its sink outside.
    pub fn crosses(&self, c: &DirectedComponent, u_mask: u64) -> bool {
        let sink_inside = self
            .bit_of(c.sink)
            .map(|b| u_mask & b != 0)
            .unwrap_or(false);
        if sink_inside {
            return false;
        }
        c.sources().any(|s| {
            self.bit_of(s)
                .map(|b| u_mask & b != 0)
                .unwrap_or(false)
        })
    }

    pub fn row_count(&self) -> u64 {
        (1u64 << self.bit_terminals.len()) - 1
    }
}

/// Solves the program to optimality.
pub fn solve_lp(program: &DcrProgram) -> Result<FractionalSolution, DcrError> {
    let n = program.components.len();
    let rows_n = program.row_count();
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(rows_n as usize);
    for u_mask in 1..=rows_n {
        let mut row = vec![0.0; n];
        for (j, c) in program.components.iter().enumerate() {
            if program.crosses(c, u_mask) {
                row[j] = 1.0;
            }
        }
        rows.push(row);
    }
    let rhs = vec![1.0; rows.len()];
    let objective: Vec<f64> = program.components.iter().map(|c| c.cost as f64).collect();
    let sol = simplex::solve_covering_min(&objective, &rows, &rhs)?;
    debug_assert!(
        rows.iter().all(|r| {
            r.iter().zip(&sol.x).map(|(a, x)| a * x).sum::<f64>() >= 1.0 - 1e-7
        }),
        "LP solution violates a covering row"
    );
    Ok(FractionalSolution {
        values: sol.x,
        objective: sol.objective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::exact_steiner;
    use crate::gen::gen_instance;
    use crate::reduction::build_steiner_instance;
    use crate::samples;

    fn sample_lp(k: usize) -> (SteinerInstance, DcrProgram) {
        let inst = samples::cactus12();
        let st = build_steiner_instance(&inst).unwrap();
        let comps = enumerate_components(&st, k).unwrap();
        let program = build_dcr_lp(comps, st.terminal_count(), 0).unwrap();
        (st, program)
    }

    #[test]
    fn pair_components_are_shortest_paths() {
        let inst = samples::cactus12();
        let st = build_steiner_instance(&inst).unwrap();
        let comps = enumerate_components(&st, 2).unwrap();
        // Terminals 8 and 9 (labels) meet at link 6: cost 2, two sinks.
        let a = st.terminal_by_label(8).unwrap();
        let b = st.terminal_by_label(9).unwrap();
        let pair: Vec<&DirectedComponent> = comps
            .iter()
            .filter(|c| c.terminals == vec![a.min(b), a.max(b)])
            .collect();
        assert_eq!(pair.len(), 2);
        assert!(pair.iter().all(|c| c.cost == 2));
        assert_eq!(pair[0].sources().count(), 1);
    }

    #[test]
    fn component_count_stays_under_bound() {
        let (st, _) = sample_lp(3);
        let comps = enumerate_components(&st, 3).unwrap();
        let t = st.terminal_count();
        let bound = t * (t - 1) + t * (t - 1) * (t - 2) / 2;
        assert!(comps.len() <= bound, "{} > {bound}", comps.len());
    }

    #[test]
    fn row_count_is_exponential() {
        let (_, program) = sample_lp(2);
        assert_eq!(program.row_count(), (1 << 9) - 1);
    }

    #[test]
    fn single_pair_instance() {
        let g = crate::cactus::validate_cactus(2, &[(0, 1), (0, 1)]).unwrap();
        let inst = crate::cactus::CacapInstance::new(g, vec![(0, 1)]).unwrap();
        let st = build_steiner_instance(&inst).unwrap();
        let comps = enumerate_components(&st, 2).unwrap();
        assert_eq!(comps.len(), 2);
        let program = build_dcr_lp(comps, 2, 0).unwrap();
        assert_eq!(program.row_count(), 1);
        let sol = solve_lp(&program).unwrap();
        assert!((sol.objective - 2.0).abs() < 1e-6);
    }

    #[test]
    fn infeasible_row_detected() {
        let (_, program) = sample_lp(2);
        // Rebuilding with no components must flag the first row.
        let err = build_dcr_lp(Vec::new(), program.terminal_count, 0).unwrap_err();
        assert!(matches!(err, DcrError::InfeasibleRow(_)));
    }

    #[test]
    fn lp_bounded_by_integral_at_full_k() {
        // With k = |T| an optimal tree splits into full components, so the
        // LP has an integral feasible point of the same cost. For smaller
        // k the restriction can push the LP above the integral optimum.
        let mut tested = 0;
        for seed in 0..24u64 {
            let inst = gen_instance(2, 3, 3, seed);
            let st = build_steiner_instance(&inst).unwrap();
            let t = st.terminal_count();
            if !(MIN_K..=MAX_K).contains(&t) {
                continue;
            }
            tested += 1;
            let integral = exact_steiner(&st).unwrap().cost() as f64;
            let comps = enumerate_components(&st, t).unwrap();
            let program = build_dcr_lp(comps, t, 0).unwrap();
            let sol = solve_lp(&program).unwrap();
            assert!(
                sol.objective <= integral + 1e-6,
                "seed {seed}: {} > {integral}",
                sol.objective
            );
        }
        assert!(tested >= 5, "corpus too thin: {tested}");
    }

    #[test]
    fn lp_monotone_in_k() {
        let (st, _) = sample_lp(2);
        let mut prev = f64::INFINITY;
        for k in 2..=4 {
            let comps = enumerate_components(&st, k).unwrap();
            let program = build_dcr_lp(comps, st.terminal_count(), 0).unwrap();
            let sol = solve_lp(&program).unwrap();
            assert!(sol.objective <= prev + 1e-7, "k={k}");
            prev = sol.objective;
        }
    }
}
