//! Ground-truth solvers: brute force over link subsets, Dreyfus-Wagner
//! dynamic programming for minimum Steiner trees, and the minimum legal
//! component trees used as LP columns (leaves exactly the component's
//! terminals, no foreign terminals inside).

use std::collections::{BTreeSet, VecDeque};
use thiserror::Error;

use crate::cactus::{is_feasible_augmentation, CacapInstance, LinkId};
use crate::steiner::{SteinerInstance, SteinerTreeSolution};

pub const BRUTE_FORCE_LINK_CAP: usize = 25;
pub const DW_TERMINAL_CAP: usize = 12;
pub const STEINER_SUBSET_CAP: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExactError {
    #[error("no link subset covers every 2-edge-cut")]
    Infeasible,
    #[error("instance exceeds the exact-solver caps ({0})")]
    TooLarge(String),
    #[error("requested terminals are not mutually reachable")]
    Disconnected,
}

/// Smallest feasible link subset, ties broken by lexicographic link order.
/// Subsets are explored by ascending size, so the first hit is optimal.
pub fn brute_force_cacap(instance: &CacapInstance) -> Result<Vec<LinkId>, ExactError> {
    let link_count = instance.links.len();
    if link_count > BRUTE_FORCE_LINK_CAP {
        return Err(ExactError::TooLarge(format!(
            "{link_count} links > {BRUTE_FORCE_LINK_CAP}"
        )));
    }
    let cuts = instance.graph.cuts().len();
    let words = cuts.div_ceil(64);
    let mut full = vec![0u64; words];
    for (ci, word) in full.iter_mut().enumerate() {
        let bits = (cuts - ci * 64).min(64);
        *word = if bits == 64 { u64::MAX } else { (1u64 << bits) - 1 };
    }
    let masks = instance.link_cut_masks();
    // suffix[i] = union of coverage of links i.. (monotone, enables pruning).
    let mut suffix = vec![vec![0u64; words]; link_count + 1];
    for i in (0..link_count).rev() {
        for w in 0..words {
            suffix[i][w] = suffix[i + 1][w] | masks[i][w];
        }
    }
    let covered = |m: &[u64]| m.iter().zip(&full).all(|(a, b)| a == b);
    if !{
        let mut u = vec![0u64; words];
        for m in &masks {
            for w in 0..words {
                u[w] |= m[w];
            }
        }
        covered(&u)
    } {
        return Err(ExactError::Infeasible);
    }

    fn search(
        start: usize,
        remaining: usize,
        acc: &mut Vec<u64>,
        chosen: &mut Vec<LinkId>,
        masks: &[Vec<u64>],
        suffix: &[Vec<u64>],
        full: &[u64],
    ) -> Option<Vec<LinkId>> {
        if remaining == 0 {
            if acc.iter().zip(full).all(|(a, b)| a == b) {
                return Some(chosen.clone());
            }
            return None;
        }
        let link_count = masks.len();
        for i in start..link_count {
            if link_count - i < remaining {
                break;
            }
            // Even taking everything from here on cannot finish the cover.
            if !acc
                .iter()
                .zip(&suffix[i])
                .zip(full)
                .all(|((a, s), f)| (a | s) & f == *f)
            {
                break;
            }
            let saved = acc.clone();
            for w in 0..acc.len() {
                acc[w] |= masks[i][w];
            }
            chosen.push(i);
            if let Some(hit) = search(i + 1, remaining - 1, acc, chosen, masks, suffix, full) {
                return Some(hit);
            }
            chosen.pop();
            *acc = saved;
        }
        None
    }

    for size in 0..=link_count {
        let mut acc = vec![0u64; words];
        let mut chosen = Vec::new();
        if let Some(best) = search(0, size, &mut acc, &mut chosen, &masks, &suffix, &full) {
            debug_assert!(is_feasible_augmentation(instance, &best));
            return Ok(best);
        }
    }
    Err(ExactError::Infeasible)
}

/// BFS distances and predecessors from `src` over the instance graph,
/// optionally restricted to a node filter.
fn bfs(
    st: &SteinerInstance,
    src: usize,
    allowed: &dyn Fn(usize) -> bool,
) -> (Vec<u32>, Vec<usize>) {
    let n = st.node_count();
    let mut dist = vec![u32::MAX; n];
    let mut prev = vec![usize::MAX; n];
    if !allowed(src) {
        return (dist, prev);
    }
    dist[src] = 0;
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        for &v in st.neighbors(u) {
            if allowed(v) && dist[v] == u32::MAX {
                dist[v] = dist[u] + 1;
                prev[v] = u;
                queue.push_back(v);
            }
        }
    }
    (dist, prev)
}

fn path_edges(prev: &[usize], mut v: usize, src: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    while v != src {
        let p = prev[v];
        out.push((p.min(v), p.max(v)));
        v = p;
    }
    out
}

#[derive(Clone, Copy, Debug)]
enum Choice {
    Leaf,
    Split(u32),
    Walk(usize),
}

/// Minimum-edge-count tree spanning `targets` (flat node ids) inside the
/// instance graph, by dynamic programming over target subsets.
pub fn dreyfus_wagner(
    st: &SteinerInstance,
    targets: &[usize],
) -> Result<SteinerTreeSolution, ExactError> {
    let t = targets.len();
    if t > DW_TERMINAL_CAP {
        return Err(ExactError::TooLarge(format!(
            "{t} terminals > {DW_TERMINAL_CAP}"
        )));
    }
    if t == 0 {
        return Ok(SteinerTreeSolution::new(Vec::new()));
    }
    if t == 1 {
        let mut nodes = BTreeSet::new();
        nodes.insert(targets[0]);
        return Ok(SteinerTreeSolution { nodes, edges: Vec::new() });
    }
    let n = st.node_count();
    let everything = |_: usize| true;
    let bfs_all: Vec<(Vec<u32>, Vec<usize>)> =
        (0..n).map(|v| bfs(st, v, &everything)).collect();
    let full = (1u32 << t) - 1;
    let inf = u32::MAX / 4;
    let mut dp = vec![vec![inf; n]; 1 << t];
    let mut how = vec![vec![Choice::Leaf; n]; 1 << t];
    for (i, &term) in targets.iter().enumerate() {
        for v in 0..n {
            let d = bfs_all[term].0[v];
            if d < inf {
                dp[1 << i][v] = d;
            }
        }
    }
    for mask in 1..=full {
        if mask.count_ones() >= 2 {
            // Merge two complementary sub-trees at the same node.
            let low = mask & mask.wrapping_neg();
            let mut sub = (mask - 1) & mask;
            while sub != 0 {
                if sub & low != 0 && sub != mask {
                    let other = mask ^ sub;
                    for v in 0..n {
                        let c = dp[sub as usize][v].saturating_add(dp[other as usize][v]);
                        if c < dp[mask as usize][v] {
                            dp[mask as usize][v] = c;
                            how[mask as usize][v] = Choice::Split(sub);
                        }
                    }
                }
                sub = (sub - 1) & mask;
            }
        }
        // Grow along shortest paths until stable (unit weights: one BFS-like
        // relaxation over predecessors suffices when done in distance order).
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| dp[mask as usize][v]);
        let mut heap: VecDeque<usize> = order.into_iter().collect();
        while let Some(u) = heap.pop_front() {
            for &v in st.neighbors(u) {
                let c = dp[mask as usize][u].saturating_add(1);
                if c < dp[mask as usize][v] {
                    dp[mask as usize][v] = c;
                    how[mask as usize][v] = Choice::Walk(u);
                    heap.push_back(v);
                }
            }
        }
    }
    let root = targets[0];
    if dp[full as usize][root] >= inf {
        return Err(ExactError::Disconnected);
    }

    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut stack = vec![(full, root)];
    while let Some((mask, v)) = stack.pop() {
        match how[mask as usize][v] {
            Choice::Leaf => {
                let i = mask.trailing_zeros() as usize;
                debug_assert_eq!(mask.count_ones(), 1);
                edges.extend(path_edges(&bfs_all[targets[i]].1, v, targets[i]));
            }
            Choice::Split(sub) => {
                stack.push((sub, v));
                stack.push((mask ^ sub, v));
            }
            Choice::Walk(u) => {
                edges.push((u.min(v), u.max(v)));
                stack.push((mask, u));
            }
        }
    }
    let mut nodes = BTreeSet::new();
    for &(a, b) in &edges {
        nodes.insert(a);
        nodes.insert(b);
    }
    for &t in targets {
        nodes.insert(t);
    }
    edges.sort_unstable();
    edges.dedup();
    let sol = SteinerTreeSolution { nodes, edges };
    debug_assert!(sol.is_tree(), "DW reconstruction must be a tree");
    Ok(sol)
}

/// Minimum-cost legal component tree over `terminal_subset`: the subset
/// terminals are exactly the leaves and no other terminal appears. The
/// Steiner part is found by Dreyfus-Wagner over neighborhood groups inside
/// the Steiner-induced subgraph; each terminal then attaches as a pendant.
/// Returns `None` when no legal component exists for the subset.
pub fn minimum_legal_component_tree(
    st: &SteinerInstance,
    terminal_subset: &[usize],
) -> Option<SteinerTreeSolution> {
    let g = terminal_subset.len();
    assert!(
        (2..=DW_TERMINAL_CAP).contains(&g),
        "component size out of range"
    );
    let steiner_only = |v: usize| !st.is_terminal(v);
    let groups: Vec<Vec<usize>> = terminal_subset
        .iter()
        .map(|&q| st.neighbors(q).iter().copied().collect())
        .collect();
    if groups.iter().any(|grp| grp.is_empty()) {
        return None;
    }
    let n = st.node_count();
    let inf = u32::MAX / 4;
    // Distances within the Steiner-induced subgraph from every group.
    let bfs_from: Vec<(Vec<u32>, Vec<usize>)> = (0..n)
        .map(|v| {
            if steiner_only(v) {
                bfs(st, v, &steiner_only)
            } else {
                (vec![u32::MAX; n], vec![usize::MAX; n])
            }
        })
        .collect();
    let full = (1u32 << g) - 1;
    let mut dp = vec![vec![inf; n]; 1 << g];
    // nearest[gi][v]: group member realizing the base distance.
    let mut nearest = vec![vec![usize::MAX; n]; g];
    let mut how = vec![vec![Choice::Leaf; n]; 1 << g];
    for (gi, grp) in groups.iter().enumerate() {
        for v in (0..n).filter(|&v| steiner_only(v)) {
            for &m in grp {
                let d = bfs_from[m].0[v];
                if d < dp[1 << gi][v] {
                    dp[1 << gi][v] = d;
                    nearest[gi][v] = m;
                }
            }
        }
    }
    for mask in 1..=full {
        if mask.count_ones() >= 2 {
            let low = mask & mask.wrapping_neg();
            let mut sub = (mask - 1) & mask;
            while sub != 0 {
                if sub & low != 0 && sub != mask {
                    let other = mask ^ sub;
                    for v in (0..n).filter(|&v| steiner_only(v)) {
                        let c = dp[sub as usize][v].saturating_add(dp[other as usize][v]);
                        if c < dp[mask as usize][v] {
                            dp[mask as usize][v] = c;
                            how[mask as usize][v] = Choice::Split(sub);
                        }
                    }
                }
                sub = (sub - 1) & mask;
            }
        }
        let mut order: Vec<usize> = (0..n).filter(|&v| steiner_only(v)).collect();
        order.sort_by_key(|&v| dp[mask as usize][v]);
        let mut queue: VecDeque<usize> = order.into_iter().collect();
        while let Some(u) = queue.pop_front() {
            for &v in st.neighbors(u) {
                if !steiner_only(v) {
                    continue;
                }
                let c = dp[mask as usize][u].saturating_add(1);
                if c < dp[mask as usize][v] {
                    dp[mask as usize][v] = c;
                    how[mask as usize][v] = Choice::Walk(u);
                    queue.push_back(v);
                }
            }
        }
    }
    let anchor = (0..n)
        .filter(|&v| steiner_only(v))
        .min_by_key(|&v| (dp[full as usize][v], v))?;
    if dp[full as usize][anchor] >= inf {
        return None;
    }
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut stack = vec![(full, anchor)];
    while let Some((mask, v)) = stack.pop() {
        match how[mask as usize][v] {
            Choice::Leaf => {
                let gi = mask.trailing_zeros() as usize;
                let m = nearest[gi][v];
                edges.extend(path_edges(&bfs_from[m].1, v, m));
            }
            Choice::Split(sub) => {
                stack.push((sub, v));
                stack.push((mask ^ sub, v));
            }
            Choice::Walk(u) => {
                edges.push((u.min(v), u.max(v)));
                stack.push((mask, u));
            }
        }
    }
    let mut tree_nodes: BTreeSet<usize> = BTreeSet::new();
    tree_nodes.insert(anchor);
    for &(a, b) in &edges {
        tree_nodes.insert(a);
        tree_nodes.insert(b);
    }
    // Pendant attach per subset terminal at its lowest tree neighbor.
    for (gi, &q) in terminal_subset.iter().enumerate() {
        let attach = groups[gi]
            .iter()
            .copied()
            .find(|m| tree_nodes.contains(m))
            .expect("group-DW tree touches every group");
        edges.push((q.min(attach), q.max(attach)));
    }
    edges.sort_unstable();
    edges.dedup();
    let sol = SteinerTreeSolution::new(edges);
    let required: BTreeSet<usize> = terminal_subset.iter().copied().collect();
    let sol = sol.pruned(|v| required.contains(&v));
    // Legality: subset terminals are exactly the leaves.
    let deg = sol.degrees();
    for &q in terminal_subset {
        if deg.get(&q).copied() != Some(1) {
            return None;
        }
    }
    for (&v, &d) in &deg {
        if st.is_terminal(v) && !required.contains(&v) {
            return None;
        }
        if d == 1 && !required.contains(&v) {
            return None;
        }
    }
    debug_assert!(sol.is_tree());
    Some(sol)
}

/// Global optimum Steiner tree over all terminals: Dreyfus-Wagner when the
/// terminal count is small, otherwise exhaustive search over Steiner-node
/// subsets in (size, lexicographic) order.
pub fn exact_steiner(st: &SteinerInstance) -> Result<SteinerTreeSolution, ExactError> {
    let t = st.terminal_count();
    let s = st.steiner_count();
    if t <= DW_TERMINAL_CAP {
        let targets: Vec<usize> = (0..t).collect();
        return dreyfus_wagner(st, &targets);
    }
    if s > STEINER_SUBSET_CAP {
        return Err(ExactError::TooLarge(format!(
            "{t} terminals > {DW_TERMINAL_CAP} and {s} Steiner nodes > {STEINER_SUBSET_CAP}"
        )));
    }
    for size in 0..=s {
        let mut chosen: Vec<usize> = Vec::new();
        if let Some(tree) = subset_scan(st, 0, size, &mut chosen) {
            return Ok(tree);
        }
    }
    Err(ExactError::Disconnected)
}

fn subset_scan(
    st: &SteinerInstance,
    start: usize,
    remaining: usize,
    chosen: &mut Vec<usize>,
) -> Option<SteinerTreeSolution> {
    if remaining == 0 {
        let mut nodes: BTreeSet<usize> = (0..st.terminal_count()).collect();
        for &l in chosen.iter() {
            nodes.insert(st.steiner_flat(l));
        }
        return st.spanning_tree(&nodes).map(SteinerTreeSolution::new);
    }
    for i in start..st.steiner_count() {
        if st.steiner_count() - i < remaining {
            break;
        }
        chosen.push(i);
        if let Some(t) = subset_scan(st, i + 1, remaining - 1, chosen) {
            chosen.pop();
            return Some(t);
        }
        chosen.pop();
    }
    None
}
