//! Rooted Steiner trees and the terminal-favoring marking scheme.
//!
//! Every Steiner node marks exactly one child edge: a uniformly random
//! terminal child when it has one (terminals are favored), otherwise a
//! uniformly random Steiner child. Marked edges connect each Steiner node
//! to a single terminal below it. The witness set `W(e)` of a tree edge
//! `e` holds the terminal pairs whose tree path contains `e` and exactly
//! one unmarked edge; `w(e) = |W(e)|` drives the rounding analysis through
//! `E[H_w]`.
//!
//! The expected cost of a node's marked edge has a closed form over the
//! degree sequence of its ancestor chain up to the first ancestor with a
//! terminal child ([`expected_cost_exact`]); full enumeration of all
//! markings ([`expected_costs_by_enumeration`]) serves as the independent
//! oracle. Node classification, grouping and the present-passing modified
//! costs turn the per-tree average into the case bound checked against
//! the global ratio.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::bounds;
use crate::rng::SplitMix64;

pub const ENUMERATION_CAP: u128 = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Terminal,
    Steiner,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("no root (every node has a parent)")]
    NoRoot,
    #[error("nodes {0} and {1} both claim to be the root")]
    MultipleRoots(usize, usize),
    #[error("root must be a Steiner node")]
    RootNotSteiner,
    #[error("root has no terminal child")]
    RootWithoutTerminalChild,
    #[error("terminal {0} has children")]
    TerminalWithChildren(usize),
    #[error("node {0} has more than two terminal children")]
    ThreeTerminalChildren(usize),
    #[error("parent array contains a cycle through node {0}")]
    CycleInParentArray(usize),
    #[error("node {0} has an out-of-range parent")]
    BadParent(usize),
    #[error("no Steiner node with a terminal neighbor")]
    NoQualifyingRoot,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MarkError {
    #[error("Steiner node {0} has no children")]
    ChildlessSteinerNode(usize),
    #[error("marking space has {0} outcomes, over the enumeration cap")]
    TooLargeForEnumeration(u128),
    #[error("tree is not well-structured at node {0}")]
    NotWellStructured(usize),
    #[error("present out of range: {0}")]
    POutOfRange(String),
}

/// A rooted tree whose terminals are leaves and whose Steiner nodes have
/// at most two terminal children; the root is a Steiner node with at
/// least one terminal child.
#[derive(Debug, Clone)]
pub struct RootedSteinerTree {
    kinds: Vec<NodeKind>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    depth: Vec<usize>,
    root: usize,
}

impl RootedSteinerTree {
    pub fn new(kinds: Vec<NodeKind>, parent: Vec<Option<usize>>) -> Result<Self, TreeError> {
        let n = kinds.len();
        assert_eq!(parent.len(), n);
        let mut root = None;
        for (v, p) in parent.iter().enumerate() {
            match p {
                None => match root {
                    None => root = Some(v),
                    Some(r) => return Err(TreeError::MultipleRoots(r, v)),
                },
                Some(p) => {
                    if *p >= n || *p == v {
                        return Err(TreeError::BadParent(v));
                    }
                }
            }
        }
        let root = root.ok_or(TreeError::NoRoot)?;
        if kinds[root] != NodeKind::Steiner {
            return Err(TreeError::RootNotSteiner);
        }
        // Depth by walking up; a walk longer than n nodes means a cycle.
        let mut depth = vec![usize::MAX; n];
        depth[root] = 0;
        for v in 0..n {
            let mut chain = Vec::new();
            let mut cur = v;
            while depth[cur] == usize::MAX {
                chain.push(cur);
                cur = parent[cur].expect("only the root lacks a parent");
                if chain.len() > n {
                    return Err(TreeError::CycleInParentArray(v));
                }
                if chain.contains(&cur) {
                    return Err(TreeError::CycleInParentArray(cur));
                }
            }
            let mut d = depth[cur];
            for &x in chain.iter().rev() {
                d += 1;
                depth[x] = d;
            }
        }
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
        for v in 0..n {
            if let Some(p) = parent[v] {
                children[p].push(v);
            }
        }
        for v in 0..n {
            if kinds[v] == NodeKind::Terminal && !children[v].is_empty() {
                return Err(TreeError::TerminalWithChildren(v));
            }
            let terminal_children = children[v]
                .iter()
                .filter(|&&c| kinds[c] == NodeKind::Terminal)
                .count();
            if terminal_children > 2 {
                return Err(TreeError::ThreeTerminalChildren(v));
            }
        }
        let tree = RootedSteinerTree {
            kinds,
            parent,
            children,
            depth,
            root,
        };
        if tree.terminal_children(root).count() == 0 {
            return Err(TreeError::RootWithoutTerminalChild);
        }
        Ok(tree)
    }

    /// Orients an unrooted tree at the lowest-id Steiner node with a
    /// terminal neighbor.
    pub fn from_unrooted(
        kinds: Vec<NodeKind>,
        edges: &[(usize, usize)],
    ) -> Result<Self, TreeError> {
        let root = choose_root(&kinds, edges)?;
        let n = kinds.len();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(a, b) in edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for nbrs in adj.iter_mut() {
            nbrs.sort_unstable();
        }
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some(u);
                    queue.push_back(v);
                }
            }
        }
        RootedSteinerTree::new(kinds, parent)
    }

    pub fn node_count(&self) -> usize {
        self.kinds.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn kind(&self, v: usize) -> NodeKind {
        self.kinds[v]
    }

    pub fn is_steiner(&self, v: usize) -> bool {
        self.kinds[v] == NodeKind::Steiner
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn steiner_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.node_count()).filter(|&v| self.is_steiner(v))
    }

    pub fn terminals(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.node_count()).filter(|&v| !self.is_steiner(v))
    }

    pub fn terminal_count(&self) -> usize {
        self.terminals().count()
    }

    pub fn steiner_count(&self) -> usize {
        self.steiner_nodes().count()
    }

    /// Number of children.
    pub fn d(&self, v: usize) -> usize {
        self.children[v].len()
    }

    pub fn steiner_children(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.children[v].iter().copied().filter(|&c| self.is_steiner(c))
    }

    pub fn terminal_children(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.children[v]
            .iter()
            .copied()
            .filter(|&c| !self.is_steiner(c))
    }

    /// Number of Steiner children.
    pub fn s(&self, v: usize) -> usize {
        self.steiner_children(v).count()
    }

    /// Number of terminal children.
    pub fn t(&self, v: usize) -> usize {
        self.terminal_children(v).count()
    }

    /// Lowest common ancestor by depth walking.
    pub fn lca(&self, mut a: usize, mut b: usize) -> usize {
        while self.depth[a] > self.depth[b] {
            a = self.parent[a].unwrap();
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent[b].unwrap();
        }
        while a != b {
            a = self.parent[a].unwrap();
            b = self.parent[b].unwrap();
        }
        a
    }
}

/// Lowest-id Steiner node adjacent to at least one terminal.
pub fn choose_root(kinds: &[NodeKind], edges: &[(usize, usize)]) -> Result<usize, TreeError> {
    let mut qualifying: Option<usize> = None;
    for &(a, b) in edges {
        for (s, t) in [(a, b), (b, a)] {
            if kinds[s] == NodeKind::Steiner && kinds[t] == NodeKind::Terminal {
                qualifying = Some(match qualifying {
                    None => s,
                    Some(q) => q.min(s),
                });
            }
        }
    }
    qualifying.ok_or(TreeError::NoQualifyingRoot)
}

/// One marked child edge per Steiner node, stored by child.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Marking {
    pub marked_child: Vec<Option<usize>>,
}

impl Marking {
    /// True when the edge from `child` to its parent is marked.
    pub fn is_marked_edge(&self, tree: &RootedSteinerTree, child: usize) -> bool {
        tree.parent(child)
            .map(|p| self.marked_child[p] == Some(child))
            .unwrap_or(false)
    }

    /// Marked and unmarked edge counts (edges are identified by child).
    pub fn split_counts(&self, tree: &RootedSteinerTree) -> (usize, usize) {
        let mut marked = 0;
        let mut unmarked = 0;
        for v in 0..tree.node_count() {
            if tree.parent(v).is_some() {
                if self.is_marked_edge(tree, v) {
                    marked += 1;
                } else {
                    unmarked += 1;
                }
            }
        }
        (marked, unmarked)
    }
}

/// Candidate marked children per Steiner node: the terminal children when
/// there are any, otherwise all (Steiner) children.
fn marking_candidates(tree: &RootedSteinerTree) -> Result<Vec<(usize, Vec<usize>)>, MarkError> {
    let mut out = Vec::new();
    for v in tree.steiner_nodes() {
        let terminals: Vec<usize> = tree.terminal_children(v).collect();
        let cand = if terminals.is_empty() {
            let steiner: Vec<usize> = tree.steiner_children(v).collect();
            if steiner.is_empty() {
                return Err(MarkError::ChildlessSteinerNode(v));
            }
            steiner
        } else {
            terminals
        };
        out.push((v, cand));
    }
    Ok(out)
}

/// Draws one marking: terminal children are favored, choices are uniform
/// and independent across nodes.
pub fn sample_marking(tree: &RootedSteinerTree, rng: &mut SplitMix64) -> Result<Marking, MarkError> {
    let mut marked_child = vec![None; tree.node_count()];
    for (v, cand) in marking_candidates(tree)? {
        marked_child[v] = Some(cand[rng.pick(cand.len())]);
    }
    Ok(Marking { marked_child })
}

/// Terminal reached from `v` by following marked edges downwards.
pub fn marked_terminal(tree: &RootedSteinerTree, marking: &Marking, v: usize) -> usize {
    let mut cur = v;
    while tree.is_steiner(cur) {
        cur = marking.marked_child[cur].expect("every Steiner node marks a child");
    }
    cur
}

/// Witness sets of every tree edge (keyed by the edge's child node).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessSets {
    pub pairs: BTreeMap<usize, Vec<(usize, usize)>>,
}

impl WitnessSets {
    pub fn w(&self, child: usize) -> usize {
        self.pairs.get(&child).map_or(0, |v| v.len())
    }
}

/// Definitional computation: a terminal pair joins `W(e)` when its tree
/// path contains `e` and exactly one unmarked edge.
pub fn witness_sets(tree: &RootedSteinerTree, marking: &Marking) -> WitnessSets {
    let n = tree.node_count();
    // Unmarked edge count from the root down to each node.
    let mut unmarked_above = vec![0usize; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| tree.depth(v));
    for &v in &order {
        if let Some(p) = tree.parent(v) {
            let unmarked = !marking.is_marked_edge(tree, v);
            unmarked_above[v] = unmarked_above[p] + usize::from(unmarked);
        }
    }
    let terminals: Vec<usize> = tree.terminals().collect();
    let mut pairs: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for v in 0..n {
        if tree.parent(v).is_some() {
            pairs.insert(v, Vec::new());
        }
    }
    for (i, &t1) in terminals.iter().enumerate() {
        for &t2 in &terminals[i + 1..] {
            let meet = tree.lca(t1, t2);
            let unmarked =
                unmarked_above[t1] + unmarked_above[t2] - 2 * unmarked_above[meet];
            if unmarked != 1 {
                continue;
            }
            let mut cur = t1;
            while cur != meet {
                pairs.get_mut(&cur).unwrap().push((t1.min(t2), t1.max(t2)));
                cur = tree.parent(cur).unwrap();
            }
            cur = t2;
            while cur != meet {
                pairs.get_mut(&cur).unwrap().push((t1.min(t2), t1.max(t2)));
                cur = tree.parent(cur).unwrap();
            }
        }
    }
    for list in pairs.values_mut() {
        list.sort_unstable();
    }
    WitnessSets { pairs }
}

/// Witness sizes only (indexed by edge child), by the same definitional
/// pair scan as [`witness_sets`] without materializing the pairs. Used by
/// the enumeration oracle and Monte-Carlo estimates where only `w(e)`
/// matters.
pub fn witness_counts(tree: &RootedSteinerTree, marking: &Marking) -> Vec<usize> {
    let n = tree.node_count();
    let mut unmarked_above = vec![0usize; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| tree.depth(v));
    for &v in &order {
        if let Some(p) = tree.parent(v) {
            let unmarked = !marking.is_marked_edge(tree, v);
            unmarked_above[v] = unmarked_above[p] + usize::from(unmarked);
        }
    }
    let terminals: Vec<usize> = tree.terminals().collect();
    let mut counts = vec![0usize; n];
    for (i, &t1) in terminals.iter().enumerate() {
        for &t2 in &terminals[i + 1..] {
            let meet = tree.lca(t1, t2);
            let unmarked =
                unmarked_above[t1] + unmarked_above[t2] - 2 * unmarked_above[meet];
            if unmarked != 1 {
                continue;
            }
            let mut cur = t1;
            while cur != meet {
                counts[cur] += 1;
                cur = tree.parent(cur).unwrap();
            }
            cur = t2;
            while cur != meet {
                counts[cur] += 1;
                cur = tree.parent(cur).unwrap();
            }
        }
    }
    counts
}

/// Terminal-spanning auxiliary tree: one edge `{t(u), t(v)}` per unmarked
/// tree edge `{u, v}`, where `t(x)` is the terminal reached from `x`
/// through marked edges.
#[derive(Debug, Clone)]
pub struct WitnessTree {
    /// Aligned with `unmarked_children`: the terminal pair of each edge.
    pub edges: Vec<(usize, usize)>,
    /// Tree edges (by child) that generated the witness edges.
    pub unmarked_children: Vec<usize>,
}

pub fn witness_tree(tree: &RootedSteinerTree, marking: &Marking) -> WitnessTree {
    let mut edges = Vec::new();
    let mut unmarked_children = Vec::new();
    for v in 0..tree.node_count() {
        let Some(p) = tree.parent(v) else { continue };
        if marking.is_marked_edge(tree, v) {
            continue;
        }
        let a = marked_terminal(tree, marking, p);
        let b = marked_terminal(tree, marking, v);
        edges.push((a.min(b), a.max(b)));
        unmarked_children.push(v);
    }
    WitnessTree {
        edges,
        unmarked_children,
    }
}

impl WitnessTree {
    /// Recomputes the witness sets the long way round: a tree edge's set
    /// collects the witness edges whose terminal-to-terminal path uses it.
    pub fn witness_sets_via_paths(&self, tree: &RootedSteinerTree) -> WitnessSets {
        let mut pairs: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        for v in 0..tree.node_count() {
            if tree.parent(v).is_some() {
                pairs.insert(v, Vec::new());
            }
        }
        for &(t1, t2) in &self.edges {
            let meet = tree.lca(t1, t2);
            for start in [t1, t2] {
                let mut cur = start;
                while cur != meet {
                    pairs.get_mut(&cur).unwrap().push((t1.min(t2), t1.max(t2)));
                    cur = tree.parent(cur).unwrap();
                }
            }
        }
        for list in pairs.values_mut() {
            list.sort_unstable();
        }
        WitnessSets { pairs }
    }
}

/// Closed-form chain cost for an explicit degree sequence
/// `(d_1, ..., d_{q-1})`: the value of `E[H_{w(m(v))}]` for a node whose
/// ancestor chain up to the first terminal-fathered ancestor carries these
/// child counts. A single entry gives plain `H_{d_1}`.
pub fn cost_formula(degrees: &[u64]) -> f64 {
    bounds::chain_cost_f64(degrees)
}

/// Exact-rational form of [`cost_formula`]; `None` past the exact cap.
pub fn cost_formula_exact(degrees: &[u64]) -> Option<BigRational> {
    bounds::chain_cost_exact(degrees)
}

/// Expected `H_{w(m(v))}` as float plus exact rational when within the
/// exact-arithmetic cap.
#[derive(Debug, Clone)]
pub struct ExpectedCost {
    pub value: f64,
    pub exact: Option<BigRational>,
}

/// Degree sequence of the ancestor chain from `v` (inclusive) up to, but
/// not including, the first proper ancestor with a terminal child.
fn chain_degrees(tree: &RootedSteinerTree, v: usize) -> Vec<u64> {
    let mut degrees = vec![tree.d(v) as u64];
    let mut cur = v;
    loop {
        let p = tree.parent(cur).expect("chain ends at a terminal-fathered ancestor");
        if tree.t(p) > 0 {
            break;
        }
        degrees.push(tree.d(p) as u64);
        cur = p;
    }
    degrees
}

/// Closed-form `E[H_{w(m(v))}]` from the ancestor-chain distribution: the
/// run of consecutive marked edges above `v` ends at each height with the
/// complementary marking probability, and the witness size is determined
/// by the chain's degrees. The root's marked edge has
/// `w = d(root) - 1` deterministically.
pub fn expected_cost_exact(
    tree: &RootedSteinerTree,
    v: usize,
) -> Result<ExpectedCost, MarkError> {
    if !tree.is_steiner(v) || tree.d(v) == 0 {
        return Err(MarkError::ChildlessSteinerNode(v));
    }
    marking_candidates(tree)?;
    if v == tree.root() {
        let w = tree.d(v) as u64 - 1;
        return Ok(ExpectedCost {
            value: bounds::harmonic_f64(w),
            exact: (w <= bounds::EXACT_INDEX_CAP).then(|| bounds::harmonic_exact(w)),
        });
    }
    let degrees = chain_degrees(tree, v);
    Ok(ExpectedCost {
        value: cost_formula(&degrees),
        exact: cost_formula_exact(&degrees),
    })
}

/// The same expectations by brute force: every marking outcome is
/// enumerated with its probability and the witness sizes are read off the
/// definitional computation. Independent of the chain formula.
pub fn expected_costs_by_enumeration(
    tree: &RootedSteinerTree,
) -> Result<BTreeMap<usize, ExpectedCost>, MarkError> {
    let candidates = marking_candidates(tree)?;
    let mut outcome_count: u128 = 1;
    for (_, cand) in &candidates {
        outcome_count = outcome_count.saturating_mul(cand.len() as u128);
        if outcome_count > ENUMERATION_CAP {
            return Err(MarkError::TooLargeForEnumeration(outcome_count));
        }
    }
    // Outcomes are equiprobable: each node picks uniformly and
    // independently, so averaging plain counts is exact.
    let steiner: Vec<usize> = candidates.iter().map(|&(v, _)| v).collect();
    let mut histogram: BTreeMap<usize, BTreeMap<usize, u64>> =
        steiner.iter().map(|&v| (v, BTreeMap::new())).collect();
    let mut counters = vec![0usize; candidates.len()];
    let mut marked_child = vec![None; tree.node_count()];
    loop {
        for (i, (v, cand)) in candidates.iter().enumerate() {
            marked_child[*v] = Some(cand[counters[i]]);
        }
        let marking = Marking {
            marked_child: marked_child.clone(),
        };
        let counts = witness_counts(tree, &marking);
        for &v in &steiner {
            let child = marking.marked_child[v].unwrap();
            *histogram
                .get_mut(&v)
                .unwrap()
                .entry(counts[child])
                .or_insert(0) += 1;
        }
        // Mixed-radix increment.
        let mut i = 0;
        loop {
            if i == counters.len() {
                let total = BigRational::from(BigInt::from(outcome_count as i64));
                let mut out = BTreeMap::new();
                for (&v, hist) in &histogram {
                    let mut sum = BigRational::zero();
                    let mut sum_f = 0.0;
                    let mut n = 0u64;
                    for (&w, &count) in hist {
                        sum += bounds::harmonic_exact(w as u64)
                            * BigRational::from(BigInt::from(count));
                        sum_f += bounds::harmonic_f64(w as u64) * count as f64;
                        n += count;
                    }
                    debug_assert_eq!(n as u128, outcome_count);
                    out.insert(
                        v,
                        ExpectedCost {
                            value: sum_f / outcome_count as f64,
                            exact: Some(sum / &total),
                        },
                    );
                }
                return Ok(out);
            }
            counters[i] += 1;
            if counters[i] < candidates[i].1.len() {
                break;
            }
            counters[i] = 0;
            i += 1;
        }
    }
}

/// Sampled estimate of `E[H_{w(m(v))}]` per Steiner node with standard
/// errors, for statistical crosschecks.
pub fn monte_carlo_costs(
    tree: &RootedSteinerTree,
    samples: usize,
    seed: u64,
) -> Result<BTreeMap<usize, (f64, f64)>, MarkError> {
    let mut rng = SplitMix64::new(seed);
    let steiner: Vec<usize> = tree.steiner_nodes().collect();
    let mut sums: BTreeMap<usize, (f64, f64)> =
        steiner.iter().map(|&v| (v, (0.0, 0.0))).collect();
    for _ in 0..samples {
        let marking = sample_marking(tree, &mut rng)?;
        let counts = witness_counts(tree, &marking);
        for &v in &steiner {
            let child = marking.marked_child[v].unwrap();
            let h = bounds::harmonic_f64(counts[child] as u64);
            let entry = sums.get_mut(&v).unwrap();
            entry.0 += h;
            entry.1 += h * h;
        }
    }
    let n = samples as f64;
    Ok(sums
        .into_iter()
        .map(|(v, (s, sq))| {
            let mean = s / n;
            let variance = (sq / n - mean * mean).max(0.0);
            (v, (mean, (variance / n).sqrt()))
        })
        .collect())
}

/// Structural node classes; unaffected by the marking randomness.
#[derive(Debug, Clone)]
pub struct NodeClassification {
    /// Steiner node with at least one terminal child.
    pub good_father: Vec<bool>,
    /// Steiner child of a good father.
    pub good: Vec<bool>,
    /// Steiner node with no Steiner children.
    pub leaf_steiner: Vec<bool>,
}

pub fn classify(tree: &RootedSteinerTree) -> NodeClassification {
    let n = tree.node_count();
    let mut good_father = vec![false; n];
    let mut good = vec![false; n];
    let mut leaf_steiner = vec![false; n];
    for v in tree.steiner_nodes() {
        good_father[v] = tree.t(v) >= 1;
        leaf_steiner[v] = tree.s(v) == 0;
    }
    for v in tree.steiner_nodes() {
        if let Some(p) = tree.parent(v) {
            good[v] = good_father[p];
        }
    }
    NodeClassification {
        good_father,
        good,
        leaf_steiner,
    }
}

/// Every Steiner node has at least two children and zero or two terminal
/// children.
pub fn is_well_structured(tree: &RootedSteinerTree) -> bool {
    tree.steiner_nodes()
        .all(|v| tree.d(v) >= 2 && matches!(tree.t(v), 0 | 2))
}

fn require_well_structured(tree: &RootedSteinerTree) -> Result<(), MarkError> {
    match tree
        .steiner_nodes()
        .find(|&v| !(tree.d(v) >= 2 && matches!(tree.t(v), 0 | 2)))
    {
        Some(v) => Err(MarkError::NotWellStructured(v)),
        None => Ok(()),
    }
}

/// Partition of the Steiner nodes: each internal node owns itself plus
/// `s - 1` leaf-Steiner nodes, and exactly one leaf-Steiner node is left
/// over as a singleton.
#[derive(Debug, Clone)]
pub struct Grouping {
    /// internal node -> its assigned leaf-Steiner members.
    pub groups: BTreeMap<usize, Vec<usize>>,
    pub leftover: usize,
}

impl Grouping {
    /// Members of the group of `v`, including `v` itself.
    pub fn group_of(&self, v: usize) -> Vec<usize> {
        let mut g = vec![v];
        if let Some(members) = self.groups.get(&v) {
            g.extend(members.iter().copied());
        }
        g
    }
}

/// Bottom-up grouping: processing an internal node consumes, from each
/// Steiner-child subtree, its single unprocessed leaf-Steiner node; the
/// lowest-id `s - 1` of them join the group and the highest bubbles up.
pub fn build_groups(tree: &RootedSteinerTree) -> Result<Grouping, MarkError> {
    require_well_structured(tree)?;
    let n = tree.node_count();
    let mut representative: Vec<Option<usize>> = vec![None; n];
    let mut groups = BTreeMap::new();
    // Post-order over Steiner nodes.
    let mut order = Vec::new();
    let mut stack = vec![(tree.root(), false)];
    while let Some((v, expanded)) = stack.pop() {
        if expanded {
            order.push(v);
            continue;
        }
        stack.push((v, true));
        for c in tree.steiner_children(v) {
            stack.push((c, false));
        }
    }
    for v in order {
        if tree.s(v) == 0 {
            representative[v] = Some(v);
            continue;
        }
        let mut candidates: Vec<usize> = tree
            .steiner_children(v)
            .map(|c| representative[c].expect("children processed first"))
            .collect();
        candidates.sort_unstable();
        let bubble = candidates.pop().expect("internal node has steiner children");
        groups.insert(v, candidates);
        representative[v] = Some(bubble);
    }
    let leftover = representative[tree.root()].expect("root processed");
    Ok(Grouping { groups, leftover })
}

/// Plain per-node bound: `H_d` for good nodes, `hhat_d` otherwise.
pub fn plain_costs(tree: &RootedSteinerTree, class: &NodeClassification) -> BTreeMap<usize, f64> {
    tree.steiner_nodes()
        .map(|v| {
            let d = tree.d(v) as u64;
            let c = if class.good[v] {
                bounds::harmonic_f64(d)
            } else {
                bounds::h_hat_f64(d)
            };
            (v, c)
        })
        .collect()
}

/// Present-passing modification: good nodes pay `p` upward, good fathers
/// collect `p` from each Steiner child. The sum over all nodes is
/// unchanged.
pub fn modified_costs(
    tree: &RootedSteinerTree,
    class: &NodeClassification,
    p: f64,
) -> Result<BTreeMap<usize, f64>, MarkError> {
    require_well_structured(tree)?;
    let p_max = bounds::h_hat_f64(2) - bounds::harmonic_f64(2);
    if !(0.0..=p_max + 1e-12).contains(&p) {
        return Err(MarkError::POutOfRange(format!("{p}")));
    }
    Ok(tree
        .steiner_nodes()
        .map(|v| {
            let d = tree.d(v) as u64;
            let s = tree.s(v) as f64;
            let base = if class.good[v] {
                bounds::harmonic_f64(d) + p
            } else {
                bounds::h_hat_f64(d)
            };
            let collected = if class.good_father[v] { s * p } else { 0.0 };
            (v, base - collected)
        })
        .collect())
}

#[derive(Debug, Clone)]
pub struct TreeBound {
    /// Max over groups of the case-table value; this is the certified
    /// upper bound for the average modified cost.
    pub case_bound: f64,
    /// Max over groups of the actual group average.
    pub max_group_average: f64,
    /// Actual average of the modified costs over all Steiner nodes.
    pub true_average: f64,
}

/// Per-tree upper bound on the average modified cost: group averages are
/// bounded by the four case formulas (or `hhat_2` for the leftover leaf),
/// and the maximum over groups dominates the global average.
pub fn tree_bound(tree: &RootedSteinerTree, p: f64) -> Result<TreeBound, MarkError> {
    let class = classify(tree);
    let grouping = build_groups(tree)?;
    let costs = modified_costs(tree, &class, p)?;
    let tables = bounds::BoundTables::new(tree.node_count() as u64 + 3);
    let mut case_bound = f64::NEG_INFINITY;
    let mut max_group_average = f64::NEG_INFINITY;
    for (&v, members) in &grouping.groups {
        let s = tree.s(v) as u64;
        let case = match (class.good[v], class.good_father[v]) {
            (true, true) => tables.a_funcs(s, p)[0],
            (true, false) => tables.a_funcs(s, p)[1],
            (false, true) => tables.a_funcs(s, p)[2],
            (false, false) => tables.a_funcs(s, p)[3],
        };
        let total: f64 = costs[&v] + members.iter().map(|m| costs[m]).sum::<f64>();
        let average = total / (members.len() + 1) as f64;
        debug_assert!(
            average <= case + 1e-9,
            "group average {average} above its case bound {case}"
        );
        case_bound = case_bound.max(case);
        max_group_average = max_group_average.max(average);
    }
    let leftover_case = tables.h_hat(2);
    let leftover_avg = costs[&grouping.leftover];
    case_bound = case_bound.max(leftover_case);
    max_group_average = max_group_average.max(leftover_avg);
    let true_average =
        costs.values().sum::<f64>() / tree.steiner_count() as f64;
    Ok(TreeBound {
        case_bound,
        max_group_average,
        true_average,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    /// The bundled 17-node tree: Steiner 0 (root), 3, 4, 5, 8, 11, 12.
    fn sample_tree() -> RootedSteinerTree {
        samples::steiner17()
    }

    /// A fixed marking used by the witness golden tests.
    fn fixed_marking() -> Marking {
        let mut m = vec![None; 17];
        m[0] = Some(2); // root marks terminal 2
        m[3] = Some(5); // Steiner-only children: marks 5
        m[4] = Some(6);
        m[5] = Some(12);
        m[8] = Some(9);
        m[11] = Some(14);
        m[12] = Some(15);
        Marking { marked_child: m }
    }

    #[test]
    fn tree_counters() {
        let t = sample_tree();
        assert_eq!(t.root(), 0);
        assert_eq!(t.steiner_count(), 7);
        assert_eq!(t.terminal_count(), 10);
        assert_eq!((t.d(0), t.s(0), t.t(0)), (3, 1, 2));
        assert_eq!((t.d(3), t.s(3), t.t(3)), (2, 2, 0));
        assert_eq!((t.d(4), t.s(4), t.t(4)), (3, 1, 2));
        assert_eq!((t.d(12), t.s(12), t.t(12)), (2, 0, 2));
        assert!(is_well_structured(&t));
    }

    #[test]
    fn invalid_trees_rejected() {
        use NodeKind::*;
        // Terminal with a child.
        let err = RootedSteinerTree::new(
            vec![Steiner, Terminal, Terminal],
            vec![None, Some(0), Some(1)],
        )
        .unwrap_err();
        assert_eq!(err, TreeError::TerminalWithChildren(1));
        // Three terminal children.
        let err = RootedSteinerTree::new(
            vec![Steiner, Terminal, Terminal, Terminal],
            vec![None, Some(0), Some(0), Some(0)],
        )
        .unwrap_err();
        assert_eq!(err, TreeError::ThreeTerminalChildren(0));
        // Parent cycle.
        let err = RootedSteinerTree::new(
            vec![Steiner, Steiner, Steiner, Terminal],
            vec![None, Some(2), Some(1), Some(0)],
        )
        .unwrap_err();
        assert!(matches!(err, TreeError::CycleInParentArray(_)));
        // Root without terminal child.
        let err = RootedSteinerTree::new(
            vec![Steiner, Steiner, Terminal, Terminal],
            vec![None, Some(0), Some(1), Some(1)],
        )
        .unwrap_err();
        assert_eq!(err, TreeError::RootWithoutTerminalChild);
    }

    #[test]
    fn choose_root_lowest_qualifying() {
        use NodeKind::*;
        let kinds = vec![Terminal, Steiner, Steiner, Terminal];
        // 1 - 0 edge makes 1 qualify; 2 only touches Steiner nodes.
        let edges = [(1, 0), (1, 2), (2, 3)];
        assert_eq!(choose_root(&kinds, &edges).unwrap(), 1);
        let t = RootedSteinerTree::from_unrooted(kinds, &edges).unwrap();
        assert_eq!(t.root(), 1);
        assert_eq!(t.parent(2), Some(1));
    }

    #[test]
    fn marking_favors_terminals() {
        let t = sample_tree();
        let mut rng = SplitMix64::new(3);
        for _ in 0..50 {
            let m = sample_marking(&t, &mut rng).unwrap();
            // Node 4 has terminal children 6, 7: one of them is marked.
            assert!(matches!(m.marked_child[4], Some(6) | Some(7)));
            // Node 3 has only Steiner children 4, 5.
            assert!(matches!(m.marked_child[3], Some(4) | Some(5)));
            let (marked, unmarked) = m.split_counts(&t);
            assert_eq!(marked, t.steiner_count());
            assert_eq!(unmarked, t.terminal_count() - 1);
            // Every Steiner node reaches a terminal through marked edges.
            for v in t.steiner_nodes() {
                let term = marked_terminal(&t, &m, v);
                assert!(!t.is_steiner(term));
            }
        }
    }

    #[test]
    fn witness_set_of_marked_cross_edge() {
        let t = sample_tree();
        let m = fixed_marking();
        let sets = witness_sets(&t, &m);
        // Edge from node 5 down to node 12 is the marked child edge of 5;
        // its witnesses pair terminal 15 with terminals 14, 6 and 2.
        assert_eq!(
            sets.pairs[&12],
            vec![(2, 15), (6, 15), (14, 15)]
        );
        assert_eq!(sets.w(12), 3);
        // w equals d(5) + d(3) - 1.
        assert_eq!(sets.w(12), t.d(5) + t.d(3) - 1);
    }

    #[test]
    fn marking_frequencies_are_uniform() {
        use NodeKind::*;
        // Root with two terminals; child with one terminal + three Steiner
        // children (each of which holds two terminals).
        let mut kinds = vec![Steiner, Terminal, Terminal, Steiner, Terminal];
        let mut parent = vec![None, Some(0), Some(0), Some(0), Some(3)];
        for _ in 0..3 {
            let s = kinds.len();
            kinds.push(Steiner);
            parent.push(Some(3));
            kinds.push(Terminal);
            parent.push(Some(s));
            kinds.push(Terminal);
            parent.push(Some(s));
        }
        let t = RootedSteinerTree::new(kinds, parent).unwrap();
        assert_eq!((t.s(3), t.t(3)), (3, 1));
        let mut rng = SplitMix64::new(314);
        let n = 100_000usize;
        let mut root_first = 0usize;
        let mut steiner_child_counts = BTreeMap::new();
        for _ in 0..n {
            let m = super::sample_marking(&t, &mut rng).unwrap();
            // Node 3 has a terminal child: the terminal edge always wins.
            assert_eq!(m.marked_child[3], Some(4));
            if m.marked_child[0] == Some(1) {
                root_first += 1;
            }
            // The root's Steiner child is never marked.
            assert_ne!(m.marked_child[0], Some(3));
            // Node 5 has two terminal children: uniform between them.
            let pick = m.marked_child[5].unwrap();
            *steiner_child_counts.entry(pick).or_insert(0usize) += 1;
        }
        // Terminal pick at the root: 1/2 within 3 sigma.
        let sigma = 0.5 / (n as f64).sqrt();
        let freq = root_first as f64 / n as f64;
        assert!((freq - 0.5).abs() < 3.0 * sigma, "freq {freq}");
        // Node 5 (two terminal children): each picked about half the time.
        for (_, count) in steiner_child_counts {
            let f = count as f64 / n as f64;
            assert!((f - 0.5).abs() < 3.0 * sigma, "child freq {f}");
        }
    }

    #[test]
    fn bad_father_marks_steiner_children_uniformly() {
        use NodeKind::*;
        // Root has two terminals plus a bad father with three Steiner
        // children (leaf-Steiner nodes with two terminals each).
        let mut kinds = vec![Steiner, Terminal, Terminal, Steiner];
        let mut parent = vec![None, Some(0), Some(0), Some(0)];
        let mut leaves = Vec::new();
        for _ in 0..3 {
            let s = kinds.len();
            leaves.push(s);
            kinds.push(Steiner);
            parent.push(Some(3));
            kinds.push(Terminal);
            parent.push(Some(s));
            kinds.push(Terminal);
            parent.push(Some(s));
        }
        let t = RootedSteinerTree::new(kinds, parent).unwrap();
        assert_eq!((t.s(3), t.t(3)), (3, 0));
        let mut rng = SplitMix64::new(2718);
        let n = 100_000usize;
        let mut counts = BTreeMap::new();
        for _ in 0..n {
            let m = super::sample_marking(&t, &mut rng).unwrap();
            *counts.entry(m.marked_child[3].unwrap()).or_insert(0usize) += 1;
        }
        let p = 1.0 / 3.0;
        let sigma = (p * (1.0 - p) / n as f64).sqrt();
        for &leaf in &leaves {
            let f = counts[&leaf] as f64 / n as f64;
            assert!((f - p).abs() < 3.0 * sigma, "leaf {leaf} freq {f}");
        }
    }

    #[test]
    fn marked_components_hold_one_terminal_each() {
        let t = sample_tree();
        let mut rng = SplitMix64::new(99);
        for _ in 0..30 {
            let m = super::sample_marking(&t, &mut rng).unwrap();
            // Union-find over marked edges only.
            let n = t.node_count();
            let mut parent: Vec<usize> = (0..n).collect();
            fn find(p: &mut Vec<usize>, mut x: usize) -> usize {
                while p[x] != x {
                    p[x] = p[p[x]];
                    x = p[x];
                }
                x
            }
            for v in 0..n {
                if t.parent(v).is_some() && m.is_marked_edge(&t, v) {
                    let a = find(&mut parent, v);
                    let b = find(&mut parent, t.parent(v).unwrap());
                    parent[a] = b;
                }
            }
            let mut terminals_per_root: BTreeMap<usize, usize> = BTreeMap::new();
            for v in 0..n {
                let r = find(&mut parent, v);
                if !t.is_steiner(v) {
                    *terminals_per_root.entry(r).or_insert(0) += 1;
                }
            }
            for v in 0..n {
                let r = find(&mut parent, v);
                assert_eq!(
                    terminals_per_root.get(&r).copied().unwrap_or(0),
                    1,
                    "marked component of {v} holds one terminal"
                );
            }
        }
    }

    #[test]
    fn counts_agree_with_sets() {
        let t = sample_tree();
        let mut rng = SplitMix64::new(77);
        for _ in 0..25 {
            let m = super::sample_marking(&t, &mut rng).unwrap();
            let sets = witness_sets(&t, &m);
            let counts = witness_counts(&t, &m);
            for v in 0..t.node_count() {
                if t.parent(v).is_some() {
                    assert_eq!(counts[v], sets.w(v), "edge above {v}");
                }
            }
        }
    }

    #[test]
    fn unmarked_edges_have_unit_witness() {
        let t = sample_tree();
        let mut rng = SplitMix64::new(11);
        for _ in 0..30 {
            let m = super::sample_marking(&t, &mut rng).unwrap();
            let sets = witness_sets(&t, &m);
            for v in 0..t.node_count() {
                if t.parent(v).is_some() && !m.is_marked_edge(&t, v) {
                    assert_eq!(sets.w(v), 1, "unmarked edge above {v}");
                }
            }
        }
    }

    #[test]
    fn witness_tree_matches_direct_computation() {
        let t = sample_tree();
        let m = fixed_marking();
        let wt = witness_tree(&t, &m);
        assert_eq!(wt.edges.len(), t.terminal_count() - 1);
        let direct = witness_sets(&t, &m);
        let via_paths = wt.witness_sets_via_paths(&t);
        assert_eq!(direct, via_paths);
        // Spans the terminals: union-find over witness edges.
        let mut parent: BTreeMap<usize, usize> =
            t.terminals().map(|x| (x, x)).collect();
        fn find(p: &mut BTreeMap<usize, usize>, x: usize) -> usize {
            let mut x = x;
            while p[&x] != x {
                let up = p[&p[&x]];
                p.insert(x, up);
                x = up;
            }
            x
        }
        for &(a, b) in &wt.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent.insert(ra, rb);
        }
        let roots: std::collections::BTreeSet<usize> =
            t.terminals().map(|x| find(&mut parent, x)).collect();
        assert_eq!(roots.len(), 1, "witness tree spans all terminals");
    }

    #[test]
    fn witness_tree_random_markings() {
        let t = sample_tree();
        let mut rng = SplitMix64::new(23);
        for _ in 0..40 {
            let m = super::sample_marking(&t, &mut rng).unwrap();
            let wt = witness_tree(&t, &m);
            assert_eq!(witness_sets(&t, &m), wt.witness_sets_via_paths(&t));
        }
    }

    #[test]
    fn expected_cost_root() {
        let t = sample_tree();
        let c = expected_cost_exact(&t, 0).unwrap();
        assert!((c.value - bounds::harmonic_f64(2)).abs() < 1e-15);
    }

    #[test]
    fn expected_cost_good_node_is_harmonic() {
        let t = sample_tree();
        // Node 8's parent (4) has terminal children, so the chain stops
        // immediately: cost H_{d(8)} = H_2.
        let c = expected_cost_exact(&t, 8).unwrap();
        assert!((c.value - bounds::harmonic_f64(2)).abs() < 1e-15);
    }

    #[test]
    fn enumeration_matches_formula_on_sample() {
        let t = sample_tree();
        let by_enum = expected_costs_by_enumeration(&t).unwrap();
        for v in t.steiner_nodes() {
            let formula = expected_cost_exact(&t, v).unwrap();
            let oracle = &by_enum[&v];
            assert!(
                (formula.value - oracle.value).abs() < 1e-12,
                "node {v}: formula {} vs enumeration {}",
                formula.value,
                oracle.value
            );
            assert_eq!(
                formula.exact.as_ref().unwrap(),
                oracle.exact.as_ref().unwrap(),
                "node {v}: exact values differ"
            );
        }
    }

    #[test]
    fn classification_on_sample() {
        let t = sample_tree();
        let class = classify(&t);
        // Node 4 has terminal children: good father; node 5 does not.
        assert!(class.good_father[4]);
        assert!(!class.good_father[5]);
        // Node 8 is a Steiner child of 4: good. Node 11 under 5: bad.
        assert!(class.good[8]);
        assert!(!class.good[11]);
        let leaves: Vec<usize> = t
            .steiner_nodes()
            .filter(|&v| class.leaf_steiner[v])
            .collect();
        assert_eq!(leaves, vec![8, 11, 12]);
    }

    #[test]
    fn grouping_on_sample() {
        let t = sample_tree();
        let g = build_groups(&t).unwrap();
        // Deterministic lowest-id selection: node 5 groups with 11,
        // node 3 with 8, node 0 and node 4 stay singletons, 12 is left.
        assert_eq!(g.groups[&5], vec![11]);
        assert_eq!(g.groups[&3], vec![8]);
        assert_eq!(g.groups[&4], Vec::<usize>::new());
        assert_eq!(g.groups[&0], Vec::<usize>::new());
        assert_eq!(g.leftover, 12);
        // Partition: group sizes are s(v), total covers all Steiner nodes.
        let mut seen: Vec<usize> = vec![g.leftover];
        for (&v, members) in &g.groups {
            assert_eq!(members.len() + 1, t.s(v).max(1));
            seen.push(v);
            seen.extend(members);
        }
        seen.sort_unstable();
        let all: Vec<usize> = t.steiner_nodes().collect();
        assert_eq!(seen, all);
    }

    #[test]
    fn modified_costs_preserve_sum() {
        let t = sample_tree();
        let class = classify(&t);
        let plain = plain_costs(&t, &class);
        for &p in &[0.0, 0.05, 0.135, 0.27] {
            let modified = modified_costs(&t, &class, p).unwrap();
            let a: f64 = plain.values().sum();
            let b: f64 = modified.values().sum();
            assert!((a - b).abs() < 1e-12, "p = {p}: {a} vs {b}");
        }
        // p = 0 leaves costs unchanged.
        let modified = modified_costs(&t, &class, 0.0).unwrap();
        for (v, c) in &plain {
            assert!((modified[v] - c).abs() < 1e-15);
        }
        assert!(matches!(
            modified_costs(&t, &class, 0.5),
            Err(MarkError::POutOfRange(_))
        ));
    }

    #[test]
    fn tree_bound_dominates_average() {
        let t = sample_tree();
        let (p_star, rho) = bounds::optimal_present_and_constant();
        let bound = tree_bound(&t, p_star).unwrap();
        assert!(bound.true_average <= bound.max_group_average + 1e-12);
        assert!(bound.max_group_average <= bound.case_bound + 1e-12);
        assert!(bound.case_bound <= rho + 1e-12);
    }

    #[test]
    fn enumeration_cap_reported() {
        use NodeKind::*;
        // A wide bad-father chain would explode; fabricate one past the cap
        // by nesting many 8-child Steiner nodes.
        let mut kinds = vec![Steiner];
        let mut parent = vec![None];
        let mut frontier = vec![0usize];
        for _ in 0..12 {
            let mut next = Vec::new();
            for &f in &frontier {
                for _ in 0..2 {
                    kinds.push(Steiner);
                    parent.push(Some(f));
                    next.push(kinds.len() - 1);
                }
            }
            frontier = next;
            if kinds.len() > 2400 {
                break;
            }
        }
        for &f in &frontier {
            for _ in 0..2 {
                kinds.push(Terminal);
                parent.push(Some(f));
            }
        }
        kinds.push(Terminal);
        parent.push(Some(0));
        let t = RootedSteinerTree::new(kinds, parent).unwrap();
        assert!(matches!(
            expected_costs_by_enumeration(&t),
            Err(MarkError::TooLargeForEnumeration(_))
        ));
    }
}
