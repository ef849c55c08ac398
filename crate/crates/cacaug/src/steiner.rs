//! Shared Steiner-instance graph representation.
//!
//! Nodes live in one flat index space: terminals first (`0..terminal_count`),
//! Steiner nodes after (`terminal_count..node_count`). For instances built by
//! the reduction, Steiner slot `i` is link `i` of the originating
//! augmentation instance; residual instances produced by contraction keep
//! all Steiner slots and relabel terminals by class representative.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::cactus::{LinkId, NodeId};

#[derive(Debug, Clone)]
pub struct SteinerInstance {
    /// Original label of each terminal slot (cactus node id, or the label
    /// of the class representative after contractions).
    terminal_labels: Vec<NodeId>,
    /// Link endpoints per Steiner slot (the back map of the reduction).
    back_map: Vec<(NodeId, NodeId)>,
    adj: Vec<BTreeSet<usize>>,
}

impl SteinerInstance {
    pub fn new(terminal_labels: Vec<NodeId>, back_map: Vec<(NodeId, NodeId)>) -> Self {
        let n = terminal_labels.len() + back_map.len();
        SteinerInstance {
            terminal_labels,
            back_map,
            adj: vec![BTreeSet::new(); n],
        }
    }

    pub fn terminal_count(&self) -> usize {
        self.terminal_labels.len()
    }

    pub fn steiner_count(&self) -> usize {
        self.back_map.len()
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn is_terminal(&self, flat: usize) -> bool {
        flat < self.terminal_labels.len()
    }

    pub fn terminal_label(&self, terminal: usize) -> NodeId {
        self.terminal_labels[terminal]
    }

    pub fn terminal_labels(&self) -> &[NodeId] {
        &self.terminal_labels
    }

    /// Terminal slot carrying `label`, if any.
    pub fn terminal_by_label(&self, label: NodeId) -> Option<usize> {
        self.terminal_labels.iter().position(|&l| l == label)
    }

    pub fn steiner_flat(&self, link: LinkId) -> usize {
        self.terminal_labels.len() + link
    }

    /// Link id of a Steiner flat index.
    pub fn link_of_flat(&self, flat: usize) -> LinkId {
        debug_assert!(!self.is_terminal(flat));
        flat - self.terminal_labels.len()
    }

    pub fn link_endpoints(&self, link: LinkId) -> (NodeId, NodeId) {
        self.back_map[link]
    }

    pub fn back_map(&self) -> &[(NodeId, NodeId)] {
        &self.back_map
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert_ne!(a, b);
        assert!(
            !(self.is_terminal(a) && self.is_terminal(b)),
            "terminal-terminal edges are not allowed"
        );
        self.adj[a].insert(b);
        self.adj[b].insert(a);
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(&b)
    }

    pub fn neighbors(&self, flat: usize) -> &BTreeSet<usize> {
        &self.adj[flat]
    }

    pub fn degree(&self, flat: usize) -> usize {
        self.adj[flat].len()
    }

    /// All edges as normalized (low, high) pairs, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.node_count() {
            for &b in &self.adj[a] {
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// True when `nodes` induces a connected subgraph containing every
    /// terminal. Empty terminal sets count as connected.
    pub fn connected_over_terminals(&self, nodes: &BTreeSet<usize>) -> bool {
        let mut required: Vec<usize> = (0..self.terminal_count()).collect();
        required.retain(|t| !nodes.contains(t));
        if !required.is_empty() {
            return false;
        }
        match self.spanning_tree(nodes) {
            Some(_) => true,
            None => self.terminal_count() == 0 && nodes.is_empty(),
        }
    }

    /// BFS spanning tree of the subgraph induced by `nodes`, rooted at its
    /// smallest element. `None` when the induced subgraph is disconnected.
    pub fn spanning_tree(&self, nodes: &BTreeSet<usize>) -> Option<Vec<(usize, usize)>> {
        let &start = nodes.iter().next()?;
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        let mut tree = Vec::new();
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if nodes.contains(&v) && seen.insert(v) {
                    tree.push((u.min(v), u.max(v)));
                    queue.push_back(v);
                }
            }
        }
        if seen.len() == nodes.len() {
            tree.sort_unstable();
            Some(tree)
        } else {
            None
        }
    }
}

/// A tree inside a Steiner instance: node set plus normalized edge list.
/// The cost is the edge count (unit weights).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SteinerTreeSolution {
    pub nodes: BTreeSet<usize>,
    pub edges: Vec<(usize, usize)>,
}

impl SteinerTreeSolution {
    pub fn new(edges: Vec<(usize, usize)>) -> Self {
        let mut nodes = BTreeSet::new();
        let mut norm: Vec<(usize, usize)> = edges
            .into_iter()
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        norm.sort_unstable();
        norm.dedup();
        for &(a, b) in &norm {
            nodes.insert(a);
            nodes.insert(b);
        }
        SteinerTreeSolution { nodes, edges: norm }
    }

    pub fn cost(&self) -> usize {
        self.edges.len()
    }

    /// Degree map over the tree's own edges.
    pub fn degrees(&self) -> BTreeMap<usize, usize> {
        let mut d = BTreeMap::new();
        for &(a, b) in &self.edges {
            *d.entry(a).or_insert(0) += 1;
            *d.entry(b).or_insert(0) += 1;
        }
        d
    }

    pub fn is_tree(&self) -> bool {
        if self.edges.is_empty() {
            return self.nodes.len() <= 1;
        }
        self.nodes.len() == self.edges.len() + 1 && self.connected()
    }

    fn connected(&self) -> bool {
        let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &(a, b) in &self.edges {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        let &start = match self.nodes.iter().next() {
            Some(s) => s,
            None => return true,
        };
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &v in adj.get(&u).into_iter().flatten() {
                if seen.insert(v) {
                    queue.push_back(v);
                }
            }
        }
        seen.len() == self.nodes.len()
    }

    /// Iteratively removes degree-1 nodes that `keep` does not protect.
    pub fn pruned(&self, keep: impl Fn(usize) -> bool) -> SteinerTreeSolution {
        let mut edges = self.edges.clone();
        loop {
            let mut deg: BTreeMap<usize, usize> = BTreeMap::new();
            for &(a, b) in &edges {
                *deg.entry(a).or_insert(0) += 1;
                *deg.entry(b).or_insert(0) += 1;
            }
            let before = edges.len();
            edges.retain(|&(a, b)| {
                !(deg[&a] == 1 && !keep(a)) && !(deg[&b] == 1 && !keep(b))
            });
            if edges.len() == before {
                break;
            }
        }
        SteinerTreeSolution::new(edges)
    }
}
