//! Iterative randomized rounding: solve the component LP, sample one
//! component proportionally to its LP value, contract its terminals into
//! one class, and repeat until a single class remains. The union of the
//! sampled components connects all terminals; a spanning tree of it,
//! stripped of useless Steiner leaves, is the rounded Steiner solution.
//!
//! The end-to-end solver reduces the augmentation instance, runs the
//! rounding loop for a number of independent seeded repetitions, lifts the
//! best tree back to links and optionally prunes redundant ones. Past the
//! LP caps it falls back to the greedy cover.

use std::collections::BTreeSet;
use thiserror::Error;

use crate::cactus::{covers, is_feasible_augmentation, CacapInstance, LinkId};
use crate::dcr::{self, DcrError, DirectedComponent, FractionalSolution};
use crate::exact::{brute_force_cacap, ExactError, BRUTE_FORCE_LINK_CAP};
use crate::reduction::{build_steiner_instance, lift_solution, ReductionError};
use crate::rng::SplitMix64;
use crate::steiner::{SteinerInstance, SteinerTreeSolution};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IrrError {
    #[error("all LP values are zero; nothing to sample")]
    ZeroMass,
    #[error(transparent)]
    Dcr(#[from] DcrError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error("greedy cover: instance is infeasible")]
    Infeasible,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Keeps the smaller root as representative.
    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }
}

/// Rounding-loop state: terminal classes over the original instance plus
/// the components sampled so far, recorded in original flat ids.
pub struct ContractionState<'a> {
    original: &'a SteinerInstance,
    classes: UnionFind,
    pub sampled: Vec<SteinerTreeSolution>,
    pub iterations: usize,
}

impl<'a> ContractionState<'a> {
    pub fn new(original: &'a SteinerInstance) -> Self {
        ContractionState {
            classes: UnionFind::new(original.terminal_count()),
            original,
            sampled: Vec::new(),
            iterations: 0,
        }
    }

    pub fn class_count(&mut self) -> usize {
        let reps: BTreeSet<usize> = (0..self.original.terminal_count())
            .map(|t| self.classes.find(t))
            .collect();
        reps.len()
    }

    /// Residual instance after the contractions so far. Terminal slot `i`
    /// of the residual is the `i`-th class representative; the returned map
    /// takes residual slots back to original terminal slots.
    pub fn residual(&mut self) -> (SteinerInstance, Vec<usize>) {
        let t = self.original.terminal_count();
        let reps: Vec<usize> = {
            let set: BTreeSet<usize> = (0..t).map(|x| self.classes.find(x)).collect();
            set.into_iter().collect()
        };
        let labels: Vec<usize> = reps
            .iter()
            .map(|&r| self.original.terminal_label(r))
            .collect();
        let mut residual = SteinerInstance::new(labels, self.original.back_map().to_vec());
        for s in 0..self.original.steiner_count() {
            let flat = self.original.steiner_flat(s);
            for &nb in self.original.neighbors(flat) {
                if self.original.is_terminal(nb) {
                    let rep = self.classes.find(nb);
                    let slot = reps.binary_search(&rep).expect("rep is listed");
                    residual.add_edge(slot, residual.steiner_flat(s));
                } else if flat < nb {
                    let other = self.original.link_of_flat(nb);
                    residual.add_edge(residual.steiner_flat(s), residual.steiner_flat(other));
                }
            }
        }
        (residual, reps)
    }

    /// Merges the component's terminal classes and records its tree mapped
    /// back to original ids. Component terminals are residual slots.
    pub fn contract(
        &mut self,
        component: &DirectedComponent,
        residual: &SteinerInstance,
        rep_map: &[usize],
    ) {
        let mut mapped_edges = Vec::new();
        for &(a, b) in &component.tree.edges {
            let (term_slot, steiner_flat) = if residual.is_terminal(a) {
                (Some(a), b)
            } else if residual.is_terminal(b) {
                (Some(b), a)
            } else {
                (None, 0)
            };
            match term_slot {
                None => {
                    let la = residual.link_of_flat(a);
                    let lb = residual.link_of_flat(b);
                    mapped_edges.push((
                        self.original.steiner_flat(la),
                        self.original.steiner_flat(lb),
                    ));
                }
                Some(slot) => {
                    let link = residual.link_of_flat(steiner_flat);
                    let orig_steiner = self.original.steiner_flat(link);
                    let rep = rep_map[slot];
                    // Lowest class member actually adjacent to the link.
                    let member = (0..self.original.terminal_count())
                        .find(|&t| {
                            self.classes.find(t) == rep
                                && self.original.has_edge(t, orig_steiner)
                        })
                        .expect("residual adjacency comes from some member");
                    mapped_edges.push((member, orig_steiner));
                }
            }
        }
        self.sampled.push(SteinerTreeSolution::new(mapped_edges));
        let base = rep_map[component.terminals[0]];
        for &slot in &component.terminals[1..] {
            self.classes.union(base, rep_map[slot]);
        }
        self.iterations += 1;
    }
}

/// Samples a column index with probability proportional to its LP value.
pub fn sample_component(
    solution: &FractionalSolution,
    rng: &mut SplitMix64,
) -> Result<usize, IrrError> {
    let total: f64 = solution.values.iter().map(|&v| v.max(0.0)).sum();
    if total <= 0.0 {
        return Err(IrrError::ZeroMass);
    }
    let draw = rng.next_f64() * total;
    let mut acc = 0.0;
    let mut last_positive = None;
    for (i, &v) in solution.values.iter().enumerate() {
        let v = v.max(0.0);
        if v > 0.0 {
            last_positive = Some(i);
            acc += v;
            if draw < acc {
                return Ok(i);
            }
        }
    }
    // Floating-point edge: draw landed on the accumulated rounding gap.
    last_positive.ok_or(IrrError::ZeroMass)
}

/// One full rounding run. Deterministic in (instance, k, seed).
pub fn iterative_randomized_rounding(
    st: &SteinerInstance,
    k: usize,
    seed: u64,
) -> Result<SteinerTreeSolution, IrrError> {
    rounding_run(st, k, SplitMix64::new(seed), None)
}

/// The first LP of every repetition is identical, so the pipeline solves it
/// once and passes it in.
fn rounding_run(
    st: &SteinerInstance,
    k: usize,
    mut rng: SplitMix64,
    first: Option<&(Vec<DirectedComponent>, FractionalSolution)>,
) -> Result<SteinerTreeSolution, IrrError> {
    let mut state = ContractionState::new(st);
    let mut first_iteration = true;
    while state.class_count() > 1 {
        let (residual, rep_map) = state.residual();
        let owned;
        let (components, solution) = match (first_iteration, first) {
            (true, Some((c, s))) => (c, s),
            _ => {
                let comps = dcr::enumerate_components(&residual, k)?;
                let program = dcr::build_dcr_lp(comps, residual.terminal_count(), 0)?;
                let sol = dcr::solve_lp(&program)?;
                owned = (program.components, sol);
                (&owned.0, &owned.1)
            }
        };
        let pick = sample_component(solution, &mut rng)?;
        state.contract(&components[pick], &residual, &rep_map);
        first_iteration = false;
    }
    // Union of sampled components, reduced to a tree and stripped of
    // Steiner leaves.
    let mut union_edges = Vec::new();
    for tree in &state.sampled {
        union_edges.extend(tree.edges.iter().copied());
    }
    if union_edges.is_empty() {
        // Single-terminal instances need no component at all.
        let nodes: BTreeSet<usize> = (0..st.terminal_count()).collect();
        return Ok(SteinerTreeSolution {
            nodes,
            edges: Vec::new(),
        });
    }
    let union = SteinerTreeSolution::new(union_edges);
    let mut adj: std::collections::BTreeMap<usize, BTreeSet<usize>> = Default::default();
    for &(a, b) in &union.edges {
        adj.entry(a).or_default().insert(b);
        adj.entry(b).or_default().insert(a);
    }
    // BFS spanning tree over the union.
    let &start = union.nodes.iter().next().expect("nonempty union");
    let mut seen = BTreeSet::from([start]);
    let mut queue = std::collections::VecDeque::from([start]);
    let mut tree_edges = Vec::new();
    while let Some(u) = queue.pop_front() {
        for &v in adj.get(&u).into_iter().flatten() {
            if seen.insert(v) {
                tree_edges.push((u.min(v), u.max(v)));
                queue.push_back(v);
            }
        }
    }
    debug_assert_eq!(seen.len(), union.nodes.len(), "sampled union is connected");
    let tree = SteinerTreeSolution::new(tree_edges);
    let pruned = tree.pruned(|v| st.is_terminal(v));
    debug_assert!((0..st.terminal_count()).all(|t| pruned.nodes.contains(&t)));
    Ok(pruned)
}

/// Greedy baseline: repeatedly take the link covering the most uncovered
/// cuts (ties to the lowest id), then drop links that became redundant, in
/// reverse pick order.
pub fn greedy_cover(instance: &CacapInstance) -> Result<Vec<LinkId>, IrrError> {
    let cuts = instance.graph.cuts();
    if !instance.is_feasible() {
        return Err(IrrError::Infeasible);
    }
    let mut uncovered: BTreeSet<usize> = (0..cuts.len()).collect();
    let mut picked: Vec<LinkId> = Vec::new();
    while !uncovered.is_empty() {
        let best = (0..instance.links.len())
            .map(|l| {
                let gain = uncovered
                    .iter()
                    .filter(|&&ci| covers(&cuts[ci], instance.links[l]))
                    .count();
                (l, gain)
            })
            .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
            .expect("nonempty link set");
        let (l, gain) = best;
        debug_assert!(gain > 0, "feasible instance always has a useful link");
        picked.push(l);
        uncovered.retain(|&ci| !covers(&cuts[ci], instance.links[l]));
    }
    // Redundancy pass in reverse pick order.
    let mut keep: Vec<LinkId> = picked.clone();
    for &l in picked.iter().rev() {
        let trial: Vec<LinkId> = keep.iter().copied().filter(|&x| x != l).collect();
        if is_feasible_augmentation(instance, &trial) {
            keep = trial;
        }
    }
    keep.sort_unstable();
    Ok(keep)
}

/// Which algorithm produced a solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    Exact,
    Irr,
    Greedy,
}

impl std::fmt::Display for SolveMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SolveMethod::Exact => write!(f, "exact"),
            SolveMethod::Irr => write!(f, "irr"),
            SolveMethod::Greedy => write!(f, "greedy"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub method: SolveMethod,
    pub terminal_count: usize,
    pub link_count: usize,
    pub cut_count: usize,
    pub per_run_costs: Vec<usize>,
    pub best_run: Option<usize>,
    pub optimum: Option<usize>,
    pub fell_back_to_greedy: bool,
    pub k: usize,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub links: Vec<LinkId>,
    pub report: SolveReport,
}

/// Reduce, round `repetitions` times, lift the best run, optionally prune.
/// Instances beyond the LP caps fall back to the greedy cover (reported in
/// the outcome).
pub fn solve_cacap(
    instance: &CacapInstance,
    k: usize,
    seed: u64,
    repetitions: usize,
    prune: bool,
) -> Result<SolveOutcome, IrrError> {
    let st = build_steiner_instance(instance)?;
    let optimum = if instance.links.len() <= BRUTE_FORCE_LINK_CAP {
        match brute_force_cacap(instance) {
            Ok(best) => Some(best.len()),
            Err(ExactError::Infeasible) => return Err(IrrError::Infeasible),
            Err(_) => None,
        }
    } else {
        None
    };
    let over_caps = st.terminal_count() > dcr::MAX_TERMINALS || !(dcr::MIN_K..=dcr::MAX_K).contains(&k);
    if over_caps {
        let links = greedy_cover(instance)?;
        let report = SolveReport {
            method: SolveMethod::Greedy,
            terminal_count: st.terminal_count(),
            link_count: links.len(),
            cut_count: instance.graph.cuts().len(),
            per_run_costs: Vec::new(),
            best_run: None,
            optimum,
            fell_back_to_greedy: true,
            k,
            seed,
        };
        return Ok(SolveOutcome { links, report });
    }

    // Shared first-iteration LP.
    let comps = dcr::enumerate_components(&st, k)?;
    let program = dcr::build_dcr_lp(comps, st.terminal_count(), 0)?;
    let first_solution = dcr::solve_lp(&program)?;
    let shared = (program.components, first_solution);

    let reps: Vec<u64> = (0..repetitions.max(1) as u64).collect();
    let runs: Vec<Result<SteinerTreeSolution, IrrError>> = crate::par::par_map(&reps, |_, &r| {
        rounding_run(&st, k, SplitMix64::stream(seed, r), Some(&shared))
    });
    let mut best: Option<(usize, usize, SteinerTreeSolution)> = None;
    let mut per_run = Vec::with_capacity(runs.len());
    for (i, run) in runs.into_iter().enumerate() {
        let tree = run?;
        let links = lift_solution(&st, &tree.nodes)?;
        per_run.push(links.len());
        let better = match &best {
            None => true,
            Some((cost, _, _)) => links.len() < *cost,
        };
        if better {
            best = Some((links.len(), i, tree));
        }
    }
    let (_, best_run, best_tree) = best.expect("at least one repetition");
    let mut links = lift_solution(&st, &best_tree.nodes)?;
    if prune {
        let ordered = links.clone();
        for &l in ordered.iter().rev() {
            let trial: Vec<LinkId> = links.iter().copied().filter(|&x| x != l).collect();
            if is_feasible_augmentation(instance, &trial) {
                links = trial;
            }
        }
    }
    links.sort_unstable();
    debug_assert!(is_feasible_augmentation(instance, &links));
    let report = SolveReport {
        method: SolveMethod::Irr,
        terminal_count: st.terminal_count(),
        link_count: links.len(),
        cut_count: instance.graph.cuts().len(),
        per_run_costs: per_run,
        best_run: Some(best_run),
        optimum,
        fell_back_to_greedy: false,
        k,
        seed,
    };
    Ok(SolveOutcome { links, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cactus::validate_cactus;
    use crate::gen::gen_instance;
    use crate::samples;

    fn two_cycle_steiner() -> SteinerInstance {
        let g = validate_cactus(2, &[(0, 1), (0, 1)]).unwrap();
        let inst = CacapInstance::new(g, vec![(0, 1)]).unwrap();
        build_steiner_instance(&inst).unwrap()
    }

    #[test]
    fn sampling_respects_zero_mass() {
        let sol = FractionalSolution {
            values: vec![0.0, 0.0],
            objective: 0.0,
        };
        let mut rng = SplitMix64::new(1);
        assert_eq!(sample_component(&sol, &mut rng), Err(IrrError::ZeroMass));
    }

    #[test]
    fn sampling_single_column() {
        let sol = FractionalSolution {
            values: vec![0.0, 3.5, 0.0],
            objective: 0.0,
        };
        let mut rng = SplitMix64::new(7);
        for _ in 0..20 {
            assert_eq!(sample_component(&sol, &mut rng).unwrap(), 1);
        }
    }

    #[test]
    fn sampling_frequency_tracks_mass() {
        let sol = FractionalSolution {
            values: vec![0.5, 0.5],
            objective: 0.0,
        };
        let mut rng = SplitMix64::new(2024);
        let n = 100_000;
        let mut hits = 0usize;
        for _ in 0..n {
            if sample_component(&sol, &mut rng).unwrap() == 0 {
                hits += 1;
            }
        }
        let freq = hits as f64 / n as f64;
        // 3 sigma of a fair coin over 1e5 draws.
        let sigma = 0.5 / (n as f64).sqrt();
        assert!(
            (freq - 0.5).abs() < 3.0 * sigma,
            "frequency {freq} too far from 1/2"
        );
    }

    #[test]
    fn two_cycle_rounds_in_one_iteration() {
        let st = two_cycle_steiner();
        let tree = iterative_randomized_rounding(&st, 2, 99).unwrap();
        assert_eq!(tree.cost(), 2);
        assert_eq!(tree.edges, vec![(0, 2), (1, 2)]);
    }

    #[test]
    fn rounding_is_deterministic() {
        let inst = samples::cactus12();
        let st = build_steiner_instance(&inst).unwrap();
        let a = iterative_randomized_rounding(&st, 3, 7).unwrap();
        let b = iterative_randomized_rounding(&st, 3, 7).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rounding_cost_at_least_optimum() {
        let inst = samples::cactus12();
        let st = build_steiner_instance(&inst).unwrap();
        let opt = crate::exact::exact_steiner(&st).unwrap().cost();
        for seed in [0u64, 1, 2, 3] {
            let tree = iterative_randomized_rounding(&st, 3, seed).unwrap();
            assert!(tree.cost() >= opt);
            let links = lift_solution(&st, &tree.nodes).unwrap();
            assert!(is_feasible_augmentation(&inst, &links), "seed {seed}");
        }
    }

    #[test]
    fn contraction_terminates_within_terminal_count() {
        let inst = samples::cactus12();
        let st = build_steiner_instance(&inst).unwrap();
        let mut state = ContractionState::new(&st);
        let mut rng = SplitMix64::new(5);
        let mut iterations = 0;
        while state.class_count() > 1 {
            let (residual, reps) = state.residual();
            let comps = dcr::enumerate_components(&residual, 3).unwrap();
            let program = dcr::build_dcr_lp(comps, residual.terminal_count(), 0).unwrap();
            let sol = dcr::solve_lp(&program).unwrap();
            let pick = sample_component(&sol, &mut rng).unwrap();
            state.contract(&program.components[pick], &residual, &reps);
            iterations += 1;
            assert!(iterations <= st.terminal_count() - 1, "must terminate");
        }
    }

    #[test]
    fn greedy_covers_everything() {
        let inst = samples::cactus12();
        let picked = greedy_cover(&inst).unwrap();
        assert!(is_feasible_augmentation(&inst, &picked));
        let opt = brute_force_cacap(&inst).unwrap();
        assert!(picked.len() >= opt.len());
    }

    #[test]
    fn greedy_two_cycle() {
        let g = validate_cactus(2, &[(0, 1), (0, 1)]).unwrap();
        let inst = CacapInstance::new(g, vec![(0, 1)]).unwrap();
        assert_eq!(greedy_cover(&inst).unwrap(), vec![0]);
    }

    #[test]
    fn greedy_infeasible() {
        let g = validate_cactus(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let inst = CacapInstance::new(g, vec![(0, 1)]).unwrap();
        assert_eq!(greedy_cover(&inst).unwrap_err(), IrrError::Infeasible);
    }

    #[test]
    fn pipeline_on_generated_instances() {
        for seed in 0..6u64 {
            let inst = gen_instance(3, 4, 4, seed);
            let out = solve_cacap(&inst, 3, seed, 4, true).unwrap();
            assert!(is_feasible_augmentation(&inst, &out.links));
            if let Some(opt) = out.report.optimum {
                assert!(out.links.len() >= opt);
            }
        }
    }

    #[test]
    fn over_cap_instances_fall_back_to_greedy() {
        // Enough cycles to push the terminal count past the LP cap.
        let inst = gen_instance(9, 6, 12, 77);
        let st = build_steiner_instance(&inst).unwrap();
        assert!(st.terminal_count() > crate::dcr::MAX_TERMINALS);
        let out = solve_cacap(&inst, 3, 1, 4, false).unwrap();
        assert!(out.report.fell_back_to_greedy);
        assert_eq!(out.report.method, SolveMethod::Greedy);
        assert!(is_feasible_augmentation(&inst, &out.links));
    }

    #[test]
    fn best_of_runs_is_monotone_in_repetitions() {
        let inst = samples::cactus12();
        let mut prev_best = usize::MAX;
        for reps in [1usize, 4, 8] {
            let out = solve_cacap(&inst, 3, 11, reps, false).unwrap();
            let best = out.report.per_run_costs.iter().copied().min().unwrap();
            assert!(best <= prev_best);
            prev_best = best.min(prev_best);
        }
    }
}
